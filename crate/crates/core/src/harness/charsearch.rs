//! Seeded search for a Stanley-Reisner ring whose Betti table depends on
//! the characteristic (char 0 against char 2).

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::compare_betti_routes;
use super::random::instance_rng;
use crate::error::Result;
use crate::exactla::{rank, Field, Matrix, PrimeField, Rationals};
use crate::grading::{MonomialIdeal, Side, Subset};
use crate::smod::SqSModule;

pub const SEARCH_VERTICES: usize = 6;
const FACETS_PER_TRY: usize = 10;

/// All faces of the complex generated by `facets`, the empty face included.
fn closure(facets: &[Subset]) -> Vec<Subset> {
    let mut faces: Vec<Subset> = Vec::new();
    for f in facets {
        // every submask of the facet
        let mut s = f.0;
        loop {
            faces.push(Subset(s));
            if s == 0 {
                break;
            }
            s = (s - 1) & f.0;
        }
    }
    faces.sort_by_key(|s| (s.len(), s.0));
    faces.dedup();
    faces
}

/// Reduced simplicial homology dimensions `dim H~_k` for `k = -1..`.
pub fn homology_ranks<F: Field>(f: &F, facets: &[Subset]) -> Vec<usize> {
    let faces = closure(facets);
    let top = faces.iter().map(|s| s.len()).max().unwrap_or(0);
    let by_len: Vec<Vec<Subset>> = (0..=top)
        .map(|k| faces.iter().copied().filter(|s| s.len() == k).collect())
        .collect();
    // boundary from faces of size k to size k - 1
    let boundary_rank = |k: usize| -> usize {
        if k == 0 || k > top {
            return 0;
        }
        let rows: Vec<Vec<i64>> = by_len[k - 1]
            .iter()
            .map(|t| {
                by_len[k]
                    .iter()
                    .map(|s| {
                        if !t.is_subset_of(*s) {
                            return 0;
                        }
                        let v = s.minus(*t).iter().next().expect("one vertex");
                        if s.count_below(v) % 2 == 0 { 1 } else { -1 }
                    })
                    .collect()
            })
            .collect();
        rank(f, &Matrix::from_i64_rows(f, &rows))
    };
    (0..=top)
        .map(|k| by_len[k].len() - boundary_rank(k) - boundary_rank(k + 1))
        .collect()
}

/// Minimal nonfaces: the generators of the Stanley-Reisner ideal.
pub fn stanley_reisner(n: usize, facets: &[Subset]) -> Vec<Subset> {
    let faces = closure(facets);
    let nonfaces = Subset::all(n).filter(|s| !faces.contains(s));
    MonomialIdeal::new(Side::S, n, nonfaces).generators().to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharWitness {
    pub seed: u64,
    pub attempt: usize,
    /// Facets, 1-based.
    pub facets: Vec<Vec<usize>>,
    /// Stanley-Reisner generators, 1-based.
    pub ideal: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct CharConfirmation {
    pub tables_differ: bool,
    pub char0_routes_agree: bool,
    pub char2_routes_agree: bool,
}

impl CharWitness {
    pub fn ideal(&self) -> MonomialIdeal {
        let gens = self
            .ideal
            .iter()
            .map(|g| Subset::from_indices(&g.iter().map(|i| i - 1).collect::<Vec<_>>()));
        MonomialIdeal::new(Side::S, SEARCH_VERTICES, gens)
    }

    /// Full Betti tables of `S/I` over `Q` and `GF(2)`, and the route
    /// comparison inside each characteristic.
    pub fn confirm(&self) -> Result<CharConfirmation> {
        let i = self.ideal();
        let q = SqSModule::from_ideal(Rationals, &i, true);
        let p = SqSModule::from_ideal(PrimeField::new(2)?, &i, true);
        let cq = compare_betti_routes(&q)?;
        let cp = compare_betti_routes(&p)?;
        Ok(CharConfirmation {
            tables_differ: cq.values[0] != cp.values[0],
            char0_routes_agree: cq.agree(),
            char2_routes_agree: cp.agree(),
        })
    }
}

/// Tries random sets of ten triangles on six vertices until the reduced
/// homology over `Q` and `GF(2)` differs.
pub fn char_search(seed: u64, max_tries: usize) -> Option<CharWitness> {
    let triangles: Vec<Subset> = Subset::all(SEARCH_VERTICES).filter(|s| s.len() == 3).collect();
    let gf2 = PrimeField::new(2).expect("2 is prime");
    for attempt in 0..max_tries {
        let mut rng = instance_rng(seed, attempt);
        let mut pick = triangles.clone();
        pick.shuffle(&mut rng);
        pick.truncate(FACETS_PER_TRY);
        if homology_ranks(&Rationals, &pick) != homology_ranks(&gf2, &pick) {
            pick.sort_by_key(|s| s.0);
            return Some(CharWitness {
                seed,
                attempt,
                facets: pick.iter().map(|s| s.to_one_based()).collect(),
                ideal: stanley_reisner(SEARCH_VERTICES, &pick)
                    .iter()
                    .map(|s| s.to_one_based())
                    .collect(),
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_and_disk_homology() {
        // boundary of a triangle: a circle
        let s = |v: &[usize]| Subset::from_indices(v);
        let circle = [s(&[0, 1]), s(&[1, 2]), s(&[0, 2])];
        assert_eq!(homology_ranks(&Rationals, &circle), vec![0, 0, 1]);
        let disk = [s(&[0, 1, 2])];
        assert_eq!(homology_ranks(&Rationals, &disk), vec![0, 0, 0, 0]);
    }

    #[test]
    fn projective_plane_is_char_sensitive() {
        // the six-vertex projective plane
        let s = |v: &[usize]| Subset::from_indices(v);
        let rp2 = [
            s(&[0, 1, 2]),
            s(&[0, 2, 3]),
            s(&[0, 3, 4]),
            s(&[0, 4, 5]),
            s(&[0, 1, 5]),
            s(&[1, 2, 4]),
            s(&[2, 3, 5]),
            s(&[1, 3, 4]),
            s(&[2, 4, 5]),
            s(&[1, 3, 5]),
        ];
        let gf2 = PrimeField::new(2).unwrap();
        assert_eq!(homology_ranks(&Rationals, &rp2), vec![0, 0, 0, 0]);
        assert_eq!(homology_ranks(&gf2, &rp2), vec![0, 0, 1, 1]);
    }
}
