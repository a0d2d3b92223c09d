use std::collections::BTreeMap;

use super::is_weakly_koszul_e;
use crate::bgg::{functor_f_module, functor_g, SpotShift, TruncatedAbove};
use crate::emod::{EModule, Spaces, SubModule};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix};
use crate::grading::{DegreeBox, Multidegree};

/// `0 = U_0 ⊂ U_1 ⊂ ... ⊂ U_p = N` with linear quotients.
#[derive(Clone, Debug)]
pub struct Filtration<F: Field> {
    /// `chain[k]` is `U_k` together with its embedding into `N`.
    pub chain: Vec<SubModule<F>>,
    /// `quotients[k] = U_{k+1} / U_k`.
    pub quotients: Vec<EModule<F>>,
    /// Generator degree of each quotient.
    pub quotient_degrees: Vec<i32>,
    /// Each quotient is generated in one degree and weakly Koszul, hence linear.
    pub quotients_linear: Vec<bool>,
    /// For every peeled step, the submodule from `H^0(D G(σ_{>n} T))` and the
    /// quotient from `H^0(D G(H^n(T)[-n]))` have the dimensions of the
    /// elementary pieces, and both complexes are acyclic off spot 0.
    pub literal_agrees: Vec<bool>,
}

impl<F: Field> Filtration<F> {
    /// Quotient dimensions add up to those of `N`, degree by degree.
    pub fn exhausts(&self, n: &EModule<F>) -> bool {
        let mut sum: BTreeMap<Multidegree, usize> = BTreeMap::new();
        for q in &self.quotients {
            for (a, k) in q.dims() {
                *sum.entry(*a).or_insert(0) += k;
            }
        }
        &sum == n.dims() && self.chain.last().is_some_and(|u| u.module.dims() == n.dims())
    }

    pub fn is_sound(&self, n: &EModule<F>) -> bool {
        self.exhausts(n)
            && self.quotients_linear.iter().all(|&b| b)
            && self.literal_agrees.iter().all(|&b| b)
    }
}

/// Peels off the top-degree linear quotient repeatedly.
pub fn wk_filtration<F: Field>(n: &EModule<F>) -> Result<Filtration<F>> {
    if n.is_zero() {
        return Err(Error::ZeroModule);
    }
    if !is_weakly_koszul_e(n)?.holds {
        return Err(Error::NotWeaklyKoszul);
    }
    let f = n.field();
    let mut cur = n.clone();
    let mut embed: Spaces<F::Elem> = n
        .dims()
        .iter()
        .map(|(a, &k)| (*a, identity(&f, k)))
        .collect();
    let mut subs_top_down: Vec<SubModule<F>> = Vec::new();
    let mut quotients = Vec::new();
    let mut quotient_degrees = Vec::new();
    let mut quotients_linear = Vec::new();
    let mut literal_agrees = Vec::new();
    while !cur.is_zero() {
        subs_top_down.push(SubModule {
            module: cur.clone(),
            basis: embed.clone(),
        });
        let degs = cur.generator_total_degrees();
        let top = *degs.last().expect("nonzero module has generators");
        let mut seeds: Spaces<F::Elem> = BTreeMap::new();
        for a in cur.degrees().filter(|a| a.total() < top) {
            seeds.insert(a, identity(&f, cur.dim_at(&a)));
        }
        let u = cur.generated_by(&seeds);
        let v = cur.quotient(&u.basis);
        if degs.len() > 1 {
            literal_agrees.push(literal_matches(&cur, &u.module, &v)?);
        }
        quotients_linear.push(
            v.generator_total_degrees() == vec![top] && is_weakly_koszul_e(&v)?.holds,
        );
        quotients.push(v);
        quotient_degrees.push(top);
        embed = compose(&f, &embed, &u.basis, &cur);
        cur = u.module;
    }
    subs_top_down.push(SubModule {
        module: EModule::zero(f, n.nvars()),
        basis: BTreeMap::new(),
    });
    subs_top_down.reverse();
    quotients.reverse();
    quotient_degrees.reverse();
    quotients_linear.reverse();
    literal_agrees.reverse();
    Ok(Filtration {
        chain: subs_top_down,
        quotients,
        quotient_degrees,
        quotients_linear,
        literal_agrees,
    })
}

/// Evaluates `H^0(D G(σ_{>n} T))` and `H^0(D G(H^n(T)[-n]))` with
/// `T = F(D N)` and `n` the lowest nonzero cohomology.
fn literal_matches<F: Field>(n: &EModule<F>, u: &EModule<F>, v: &EModule<F>) -> Result<bool> {
    let d = n.nvars();
    let one = Multidegree::ones(d);
    let t = functor_f_module(&n.dual())?.complex;
    let Some((lo, hi)) = t.spot_range() else {
        return Ok(false);
    };
    let gbox = t.generator_box().expect("nonzero complex");
    let mut low = None;
    for p in lo..=hi {
        let nonzero = gbox
            .points()
            .iter()
            .map(|c| t.cohomology_dim_at(p, c))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .any(|h| h > 0);
        if nonzero {
            low = Some(p);
            break;
        }
    }
    let Some(low) = low else { return Ok(false) };
    let ndegs: Vec<Multidegree> = n.degrees().map(|a| one - a).collect();
    let window = DegreeBox::hull(d, ndegs.iter()).expect("nonzero module");
    let trunc = TruncatedAbove { t: &t, n: low };
    let g_u = functor_g(&trunc, window)?;
    // H^n(T) is needed on the degrees -c - e_L, c in the window
    let need = DegreeBox::new(-window.hi - one, -window.lo);
    let hn = t.cohomology_pieces(low, need)?;
    let shifted = SpotShift { inner: &hn, by: low };
    let g_v = functor_g(&shifted, window)?;
    let acyclic = |spots: std::collections::BTreeSet<i32>| spots.iter().all(|&p| p == 0);
    if !acyclic(g_u.nonzero_spots()?) || !acyclic(g_v.nonzero_spots()?) {
        return Ok(false);
    }
    let u_lit = g_u.complex.cohomology(0).dual();
    let v_lit = g_v.complex.cohomology(0).dual();
    u_lit.check_relations()?;
    v_lit.check_relations()?;
    Ok(u_lit.dims() == u.dims() && v_lit.dims() == v.dims())
}

fn identity<F: Field>(f: &F, n: usize) -> Vec<Vec<F::Elem>> {
    (0..n)
        .map(|k| {
            let mut e = vec![f.zero(); n];
            e[k] = f.one();
            e
        })
        .collect()
}

/// Embedding of a submodule of `cur` into `N`, given the embedding of `cur`.
fn compose<F: Field>(
    f: &F,
    outer: &Spaces<F::Elem>,
    inner: &Spaces<F::Elem>,
    cur: &EModule<F>,
) -> Spaces<F::Elem> {
    inner
        .iter()
        .map(|(a, vs)| {
            let m = Matrix::from_columns(f, outer[a][0].len(), &outer[a]);
            debug_assert_eq!(m.cols(), cur.dim_at(a));
            (*a, vs.iter().map(|v| m.apply(f, v)).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;
    use crate::grading::{MonomialIdeal, Side, Subset};

    fn s(v: &[usize]) -> Subset {
        Subset::from_indices(v)
    }

    #[test]
    fn linear_module_has_one_step() {
        let f = Rationals;
        let m = EModule::from_ideal(f, &MonomialIdeal::maximal(Side::E, 3), false);
        let fl = wk_filtration(&m).unwrap();
        assert_eq!(fl.chain.len(), 2);
        assert!(fl.is_sound(&m));
    }

    #[test]
    fn two_degree_ideal() {
        // (y1, y2y3) over d = 3 has generators in degrees 1 and 2
        let f = Rationals;
        let j = MonomialIdeal::new(Side::E, 3, [s(&[0]), s(&[1, 2])]);
        let m = EModule::from_ideal(f, &j, false);
        let fl = wk_filtration(&m).unwrap();
        assert_eq!(fl.quotient_degrees, vec![1, 2]);
        assert_eq!(fl.literal_agrees, vec![true]);
        assert!(fl.is_sound(&m), "{:?}", fl.quotients_linear);
    }

    #[test]
    fn rejects_non_weakly_koszul() {
        let f = Rationals;
        let j = MonomialIdeal::new(Side::E, 4, [s(&[0, 1]), s(&[2, 3])]);
        let n = EModule::from_ideal(f, &j, true);
        assert!(matches!(wk_filtration(&n), Err(Error::NotWeaklyKoszul)));
    }
}
