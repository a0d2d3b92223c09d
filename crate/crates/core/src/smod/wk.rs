use super::{SqSModule, SqSpaces};
use crate::exactla::Field;
use crate::grading::{BettiTable, Subset};

/// Outcome of the componentwise-linearity test, one row per degree checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeaklyKoszulCertificate {
    /// `(i, reg of M_[i], linear?)`.
    pub degrees: Vec<(i32, Option<i32>, bool)>,
}

impl WeaklyKoszulCertificate {
    pub fn holds(&self) -> bool {
        self.degrees.iter().all(|(_, _, ok)| *ok)
    }

    pub fn first_failure(&self) -> Option<i32> {
        self.degrees.iter().find(|(_, _, ok)| !ok).map(|(i, _, _)| *i)
    }
}

impl<F: Field> SqSModule<F> {
    /// `M_[i]`: the submodule generated by the squarefree components of
    /// total degree `i`.
    pub fn squarefree_degree_part(&self, i: usize) -> SqSModule<F> {
        let d = self.nvars();
        let f = self.field();
        let mut seeds: SqSpaces<F::Elem> = vec![Vec::new(); 1 << d];
        for s in Subset::all(d).filter(|s| s.len() == i) {
            let n = self.dim(s);
            seeds[s.index()] = (0..n)
                .map(|k| {
                    let mut e = vec![f.zero(); n];
                    e[k] = f.one();
                    e
                })
                .collect();
        }
        self.submodule(&self.span_closure(&seeds))
    }

    /// Componentwise linearity in its squarefree form: `M_[i]` has an
    /// `i`-linear resolution for every `i` with `M_[i] != 0`.
    pub fn weakly_koszul(&self) -> WeaklyKoszulCertificate {
        let d = self.nvars();
        let mut degrees = Vec::new();
        for i in 0..=d {
            let part = self.squarefree_degree_part(i);
            if part.is_zero() {
                continue;
            }
            let b: BettiTable = part.betti();
            degrees.push((i as i32, b.reg(), b.is_linear(i as i32)));
        }
        WeaklyKoszulCertificate { degrees }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;
    use crate::grading::{MonomialIdeal, Side};

    fn s(v: &[usize]) -> Subset {
        Subset::from_indices(v)
    }

    #[test]
    fn linear_modules_are_weakly_koszul() {
        let f = Rationals;
        assert!(SqSModule::residue_field(f, 3).weakly_koszul().holds());
        let m = SqSModule::from_ideal(f, &MonomialIdeal::maximal(Side::S, 3), false);
        assert!(m.weakly_koszul().holds());
    }

    #[test]
    fn two_disjoint_edges() {
        let f = Rationals;
        let i = MonomialIdeal::new(Side::S, 4, [s(&[0, 1]), s(&[2, 3])]);
        let m = SqSModule::from_ideal(f, &i, false);
        let c = m.weakly_koszul();
        assert!(!c.holds());
        assert_eq!(c.first_failure(), Some(2));
    }
}
