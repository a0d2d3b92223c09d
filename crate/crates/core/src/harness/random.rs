//! Seeded instance generators. Every instance is a small serializable spec
//! that rebuilds the same module over any field.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bgg::{EComplex, EMorphism};
use crate::emod::EModule;
use crate::error::Result;
use crate::exactla::{Field, Rationals};
use crate::grading::{MonomialIdeal, Multidegree, Side, Subset};
use crate::smod::{Pieces, SqComplex, SqMorphism, SqSModule};
use crate::grading::DegreeBox;
use crate::exactla::Matrix;

/// The generator for instance `index` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64);
    r
}

fn to_sets(v: &[Vec<usize>]) -> Vec<Subset> {
    v.iter()
        .map(|g| Subset::from_indices(&g.iter().map(|i| i - 1).collect::<Vec<_>>()))
        .collect()
}

fn from_sets(v: &[Subset]) -> Vec<Vec<usize>> {
    v.iter().map(|s| s.to_one_based()).collect()
}

/// A random antichain of subsets of `[d]`: each nonempty subset is drawn
/// independently with probability `density`, then the family is minimalized.
pub fn random_antichain<R: Rng>(rng: &mut R, d: usize, density: f64) -> Vec<Subset> {
    let picked: Vec<Subset> = Subset::all(d)
        .filter(|s| !s.is_empty())
        .filter(|_| rng.gen_bool(density.clamp(0.0, 1.0)))
        .collect();
    MonomialIdeal::new(Side::E, d, picked).generators().to_vec()
}

/// Draws the density itself, so both sparse and dense ideals show up.
pub fn random_ideal_gens<R: Rng>(rng: &mut R, d: usize) -> Vec<Subset> {
    let density = rng.gen_range(0.05..0.6);
    random_antichain(rng, d, density)
}

/// All antichains of subsets of `[d]`, including the empty one and `{∅}`.
pub fn all_antichains(d: usize) -> Vec<Vec<Subset>> {
    // extend antichains by adding sets in a fixed order; a set may join only
    // if it is incomparable with everything chosen so far
    let sets: Vec<Subset> = Subset::all(d).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(sets: &[Subset], k: usize, cur: &mut Vec<Subset>, out: &mut Vec<Vec<Subset>>) {
        if k == sets.len() {
            out.push(cur.clone());
            return;
        }
        go(sets, k + 1, cur, out);
        let s = sets[k];
        if cur.iter().all(|c| !c.is_subset_of(s) && !s.is_subset_of(*c)) {
            cur.push(s);
            go(sets, k + 1, cur, out);
            cur.pop();
        }
    }
    go(&sets, 0, &mut cur, &mut out);
    for a in out.iter_mut() {
        a.sort_by_key(|s| (s.len(), s.0));
    }
    out.sort_by(|a, b| {
        let ka: Vec<_> = a.iter().map(|s| (s.len(), s.0)).collect();
        let kb: Vec<_> = b.iter().map(|s| (s.len(), s.0)).collect();
        (a.len(), ka).cmp(&(b.len(), kb))
    });
    out
}

/// The antichains that give proper ideals (everything except `{∅}`).
pub fn proper_antichains(d: usize) -> Vec<Vec<Subset>> {
    all_antichains(d)
        .into_iter()
        .filter(|a| !a.contains(&Subset::EMPTY))
        .collect()
}

/// An element of a free module component: a coefficient for each generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub at: Vec<usize>,
    pub coeffs: Vec<i64>,
}

/// A replayable squarefree module. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleSpec {
    /// `S/I` or `E/J`.
    Quotient { d: usize, gens: Vec<Vec<usize>> },
    /// The ideal itself.
    Ideal { d: usize, gens: Vec<Vec<usize>> },
    /// `⊕ S(-G_k)` modulo the submodule generated by the relations.
    Presented {
        d: usize,
        free: Vec<Vec<usize>>,
        relations: Vec<Relation>,
    },
}

impl ModuleSpec {
    pub fn nvars(&self) -> usize {
        match self {
            Self::Quotient { d, .. } | Self::Ideal { d, .. } | Self::Presented { d, .. } => *d,
        }
    }

    pub fn quotient(d: usize, gens: &[Subset]) -> Self {
        Self::Quotient {
            d,
            gens: from_sets(gens),
        }
    }

    fn ideal(&self, side: Side) -> Option<(MonomialIdeal, bool)> {
        match self {
            Self::Quotient { d, gens } => Some((MonomialIdeal::new(side, *d, to_sets(gens)), true)),
            Self::Ideal { d, gens } => Some((MonomialIdeal::new(side, *d, to_sets(gens)), false)),
            Self::Presented { .. } => None,
        }
    }

    pub fn build_s<F: Field>(&self, f: F) -> SqSModule<F> {
        if let Some((i, q)) = self.ideal(Side::S) {
            return SqSModule::from_ideal(f, &i, q);
        }
        let Self::Presented { d, free, relations } = self else {
            unreachable!()
        };
        let free = SqSModule::free(f, *d, &to_sets(free));
        let mut seeds = vec![Vec::new(); 1 << d];
        for r in relations {
            let at = to_sets(std::slice::from_ref(&r.at))[0];
            let v: Vec<F::Elem> = r.coeffs.iter().map(|&c| f.from_i64(c)).collect();
            seeds[at.index()].push(v);
        }
        free.quotient(&free.span_closure(&seeds))
    }

    /// `E/J`, `J`, or `E(M)` for a presented `M`.
    pub fn build_e<F: Field>(&self, f: F) -> EModule<F> {
        match self.ideal(Side::E) {
            Some((j, q)) => EModule::from_ideal(f, &j, q),
            None => self.build_s(f).to_emodule(),
        }
    }
}

fn coeff<R: Rng>(rng: &mut R) -> i64 {
    rng.gen_range(-2..=2)
}

fn nonzero_coeffs<R: Rng>(rng: &mut R, n: usize) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..n).map(|_| coeff(rng)).collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

fn random_subset<R: Rng>(rng: &mut R, d: usize, max_len: usize) -> Subset {
    let mut idx: Vec<usize> = (0..d).collect();
    idx.shuffle(rng);
    let k = rng.gen_range(0..=max_len.min(d));
    Subset::from_indices(&idx[..k])
}

/// A nonzero squarefree module: a quotient, an ideal, or a small
/// presentation of rank 1 or 2.
pub fn random_module_spec<R: Rng>(rng: &mut R, d: usize) -> ModuleSpec {
    loop {
        let spec = match rng.gen_range(0..4) {
            0 | 1 => {
                let gens = random_ideal_gens(rng, d);
                if gens.contains(&Subset::EMPTY) {
                    continue;
                }
                ModuleSpec::quotient(d, &gens)
            }
            2 => {
                let gens = random_ideal_gens(rng, d);
                if gens.is_empty() {
                    continue;
                }
                ModuleSpec::Ideal {
                    d,
                    gens: from_sets(&gens),
                }
            }
            _ => {
                let rank = rng.gen_range(1..=2);
                let free: Vec<Subset> = (0..rank).map(|_| random_subset(rng, d, 1)).collect();
                let shape = SqSModule::free(Rationals, d, &free);
                let nrel = rng.gen_range(1..=3);
                let mut relations = Vec::new();
                for _ in 0..nrel {
                    let at = random_subset(rng, d, d);
                    let n = shape.dim(at);
                    if n == 0 {
                        continue;
                    }
                    relations.push(Relation {
                        at: at.to_one_based(),
                        coeffs: nonzero_coeffs(rng, n),
                    });
                }
                ModuleSpec::Presented {
                    d,
                    free: from_sets(&free),
                    relations,
                }
            }
        };
        if !spec.build_s(Rationals).is_zero() {
            return spec;
        }
    }
}

/// `[⊕ R(-G_k) -> ⊕ R/I_l]` with `R = E` or `S`, sitting at spots `lo, lo + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoTermSpec {
    pub d: usize,
    pub lo: i32,
    /// Generators of the ideals in the target summands.
    pub target: Vec<Vec<Vec<usize>>>,
    pub free: Vec<Vec<usize>>,
    /// Image of each free generator in the target component of its degree.
    pub images: Vec<Vec<i64>>,
}

impl TwoTermSpec {
    fn target_e<F: Field>(&self, f: F) -> EModule<F> {
        let mut it = self.target.iter().map(|g| {
            EModule::from_ideal(f, &MonomialIdeal::new(Side::E, self.d, to_sets(g)), true)
        });
        let first = it.next().expect("at least one summand");
        it.fold(first, |a, b| a.direct_sum(&b))
    }

    fn target_s<F: Field>(&self, f: F) -> SqSModule<F> {
        let mut it = self.target.iter().map(|g| {
            SqSModule::from_ideal(f, &MonomialIdeal::new(Side::S, self.d, to_sets(g)), true)
        });
        let first = it.next().expect("at least one summand");
        it.fold(first, |a, b| a.direct_sum(&b))
    }

    fn images<F: Field>(&self, f: F) -> Vec<Vec<F::Elem>> {
        self.images
            .iter()
            .map(|v| v.iter().map(|&c| f.from_i64(c)).collect())
            .collect()
    }

    pub fn build_e<F: Field>(&self, f: F) -> Result<EComplex<F>> {
        let tgt = self.target_e(f);
        let gens: Vec<Multidegree> = to_sets(&self.free).iter().map(|s| s.to_degree(self.d)).collect();
        let (src, map) = EMorphism::from_free(&gens, &self.images(f), &tgt);
        EComplex::two_term(src, tgt, map, self.lo)
    }

    pub fn build_s<F: Field>(&self, f: F) -> Result<SqComplex<F>> {
        let tgt = self.target_s(f);
        let gens = to_sets(&self.free);
        let map = SqMorphism::from_free(&gens, &self.images(f), &tgt);
        let src = SqSModule::free(f, self.d, &gens);
        let c = SqComplex::two_term(src, tgt, map, self.lo);
        c.check()?;
        Ok(c)
    }
}

/// One or two quotient summands and up to three free generators with
/// random images.
pub fn random_two_term<R: Rng>(rng: &mut R, d: usize, side: Side) -> TwoTermSpec {
    loop {
        let nsum = rng.gen_range(1..=2);
        let mut target = Vec::new();
        for _ in 0..nsum {
            let g = random_ideal_gens(rng, d);
            if g.contains(&Subset::EMPTY) {
                continue;
            }
            target.push(from_sets(&g));
        }
        if target.is_empty() {
            continue;
        }
        let mut spec = TwoTermSpec {
            d,
            lo: rng.gen_range(-1..=0),
            target,
            free: Vec::new(),
            images: Vec::new(),
        };
        let ngen = rng.gen_range(1..=3);
        for _ in 0..ngen {
            let g = random_subset(rng, d, 2);
            let n = match side {
                Side::E => spec.target_e(Rationals).dim_at(&g.to_degree(d)),
                Side::S => spec.target_s(Rationals).dim(g),
            };
            if n == 0 {
                continue;
            }
            spec.free.push(g.to_one_based());
            spec.images.push((0..n).map(|_| coeff(rng)).collect());
        }
        if !spec.free.is_empty() {
            return spec;
        }
    }
}

/// A finite-length monomial quotient `S/I` given by exponent vectors;
/// `I` contains a power of every variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtinianSpec {
    pub d: usize,
    pub gens: Vec<Vec<i32>>,
}

impl ArtinianSpec {
    pub fn contains(&self, a: &Multidegree) -> bool {
        self.gens
            .iter()
            .any(|g| g.iter().enumerate().all(|(i, &e)| a.get(i) >= e))
    }

    /// Componentwise maximum of the generators.
    pub fn top(&self) -> Multidegree {
        let mut t = Multidegree::zero(self.d);
        for g in &self.gens {
            t = t.componentwise_max(&Multidegree::from_slice(g));
        }
        t
    }

    /// `max { |a| : x^a ∉ I }`.
    pub fn socle_top(&self) -> i32 {
        DegreeBox::new(Multidegree::zero(self.d), self.top())
            .points()
            .into_iter()
            .filter(|a| !self.contains(a))
            .map(|a| a.total())
            .max()
            .expect("1 is not in a proper ideal")
    }

    /// `S/I` evaluated on `[0, top + 1]`.
    pub fn pieces<F: Field>(&self, f: F) -> Pieces<F> {
        let d = self.d;
        let window = DegreeBox::new(Multidegree::zero(d), self.top() + Multidegree::ones(d));
        let mut p = Pieces::new(f, d, window);
        for a in window.points() {
            if self.contains(&a) {
                continue;
            }
            p.set_dim(a, 1);
            for i in 0..d {
                let b = a.plus_unit(i);
                let m = if self.contains(&b) {
                    Matrix::zeros(&f, 0, 1)
                } else {
                    Matrix::identity(&f, 1)
                };
                p.set_mult(i, a, m);
            }
        }
        p
    }
}

pub fn random_artinian<R: Rng>(rng: &mut R, d: usize) -> ArtinianSpec {
    let mut gens: Vec<Vec<i32>> = (0..d)
        .map(|i| {
            let mut g = vec![0; d];
            g[i] = rng.gen_range(1..=3);
            g
        })
        .collect();
    for _ in 0..rng.gen_range(0..=3) {
        gens.push((0..d).map(|_| rng.gen_range(0..=2)).collect());
    }
    gens.retain(|g| g.iter().any(|&e| e > 0));
    ArtinianSpec { d, gens }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antichain_counts() {
        // Dedekind numbers
        assert_eq!(all_antichains(2).len(), 6);
        assert_eq!(all_antichains(3).len(), 20);
        assert_eq!(all_antichains(4).len(), 168);
        assert_eq!(proper_antichains(4).len(), 167);
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a: Vec<_> = (0..5).map(|k| random_module_spec(&mut instance_rng(1, k), 3)).collect();
        let b: Vec<_> = (0..5).map(|k| random_module_spec(&mut instance_rng(1, k), 3)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn density_extremes() {
        let mut r = instance_rng(0, 0);
        assert!(random_antichain(&mut r, 3, 0.0).is_empty());
        let all = random_antichain(&mut r, 3, 1.0);
        assert_eq!(all, MonomialIdeal::maximal(Side::E, 3).generators());
    }

    #[test]
    fn random_complexes_build() {
        for k in 0..10 {
            let e = random_two_term(&mut instance_rng(3, k), 3, Side::E);
            e.build_e(Rationals).unwrap();
            let s = random_two_term(&mut instance_rng(3, k), 3, Side::S);
            s.build_s(Rationals).unwrap();
        }
    }

    #[test]
    fn artinian_socle() {
        let a = ArtinianSpec {
            d: 2,
            gens: vec![vec![2, 0], vec![0, 3]],
        };
        assert_eq!(a.socle_top(), 3);
    }
}
