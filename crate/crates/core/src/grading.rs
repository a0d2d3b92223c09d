//! Degrees, squarefree subsets, the exterior sign, and Betti tables.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactla::Field;

/// Largest number of variables supported by the fixed-size degree type.
pub const MAX_VARS: usize = 8;

/// A vector in `Z^d`, `d <= MAX_VARS`. Unused slots are kept at zero so the
/// derived comparisons and hashing only see the live coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multidegree {
    d: u8,
    v: [i32; MAX_VARS],
}

impl Multidegree {
    pub fn zero(d: usize) -> Self {
        assert!(d <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        Self {
            d: d as u8,
            v: [0; MAX_VARS],
        }
    }

    pub fn ones(d: usize) -> Self {
        let mut a = Self::zero(d);
        for i in 0..d {
            a.v[i] = 1;
        }
        a
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut a = Self::zero(d);
        a.v[i] = 1;
        a
    }

    pub fn from_slice(v: &[i32]) -> Self {
        let mut a = Self::zero(v.len());
        a.v[..v.len()].copy_from_slice(v);
        a
    }

    pub fn splat(d: usize, c: i32) -> Self {
        let mut a = Self::zero(d);
        for i in 0..d {
            a.v[i] = c;
        }
        a
    }

    pub fn nvars(&self) -> usize {
        self.d as usize
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.v[..self.d as usize]
    }

    pub fn get(&self, i: usize) -> i32 {
        self.v[i]
    }

    #[must_use]
    pub fn with(mut self, i: usize, c: i32) -> Self {
        self.v[i] = c;
        self
    }

    /// Total degree `|a|`.
    pub fn total(&self) -> i32 {
        self.as_slice().iter().sum()
    }

    #[must_use]
    pub fn plus_unit(mut self, i: usize) -> Self {
        self.v[i] += 1;
        self
    }

    #[must_use]
    pub fn minus_unit(mut self, i: usize) -> Self {
        self.v[i] -= 1;
        self
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .all(|(a, b)| a <= b)
    }

    pub fn componentwise_min(&self, other: &Self) -> Self {
        let mut a = *self;
        for i in 0..self.nvars() {
            a.v[i] = self.v[i].min(other.v[i]);
        }
        a
    }

    pub fn componentwise_max(&self, other: &Self) -> Self {
        let mut a = *self;
        for i in 0..self.nvars() {
            a.v[i] = self.v[i].max(other.v[i]);
        }
        a
    }

    pub fn is_nonnegative(&self) -> bool {
        self.as_slice().iter().all(|&c| c >= 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.as_slice().iter().all(|&c| c == 0 || c == 1)
    }

    /// `supp(a) = { i | a_i > 0 }`.
    pub fn support(&self) -> Subset {
        let mut s = Subset::EMPTY;
        for i in 0..self.nvars() {
            if self.v[i] > 0 {
                s = s.with(i);
            }
        }
        s
    }

    /// `supp(-a)`, the coordinates that are negative.
    pub fn negative_support(&self) -> Subset {
        let mut s = Subset::EMPTY;
        for i in 0..self.nvars() {
            if self.v[i] < 0 {
                s = s.with(i);
            }
        }
        s
    }
}

impl std::ops::Add for Multidegree {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.d, rhs.d);
        for i in 0..self.nvars() {
            self.v[i] += rhs.v[i];
        }
        self
    }
}

impl std::ops::Sub for Multidegree {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.d, rhs.d);
        for i in 0..self.nvars() {
            self.v[i] -= rhs.v[i];
        }
        self
    }
}

impl std::ops::Neg for Multidegree {
    type Output = Self;
    fn neg(mut self) -> Self {
        for i in 0..self.nvars() {
            self.v[i] = -self.v[i];
        }
        self
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.as_slice().iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Multidegree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multidegree {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<i32> = Vec::deserialize(de)?;
        if v.len() > MAX_VARS {
            return Err(serde::de::Error::custom("too many coordinates"));
        }
        Ok(Self::from_slice(&v))
    }
}

/// A subset of `[d]` (0-based internally), i.e. a squarefree degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(d: usize) -> Self {
        Subset((1u32 << d) - 1)
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        idx.iter().fold(Self::EMPTY, |s, &i| s.with(i))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[must_use]
    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    #[must_use]
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn minus(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn complement(self, d: usize) -> Subset {
        Subset(!self.0 & Self::full(d).0)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    pub fn to_degree(self, d: usize) -> Multidegree {
        let mut a = Multidegree::zero(d);
        for i in self.iter() {
            a = a.with(i, 1);
        }
        a
    }

    /// All subsets of `[d]`, in increasing bitmask order.
    pub fn all(d: usize) -> impl Iterator<Item = Subset> {
        (0..1u32 << d).map(Subset)
    }

    /// 1-based indices, as written in instance files.
    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Number of elements of `self` smaller than `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u32 << i) - 1)).count_ones() as usize
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let parts: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}}}", parts.join(","))
    }
}

/// `true` when `(-1)^{alpha(i,F)} = -1`, where `alpha(i,F) = #{ j in F | j < i }`.
pub fn alpha_is_negative(i: usize, set: Subset) -> bool {
    set.count_below(i) % 2 == 1
}

/// The sign `(-1)^{alpha(i,F)}` as a field scalar.
pub fn alpha_sign<F: Field>(f: &F, i: usize, set: Subset) -> F::Elem {
    if alpha_is_negative(i, set) {
        f.from_i64(-1)
    } else {
        f.one()
    }
}

/// Sign of `y_a * y_b` against `y_{a ∪ b}` for disjoint sets (product of the
/// inversions); zero overlap is the caller's job.
pub fn wedge_is_negative(a: Subset, b: Subset) -> bool {
    let mut inv = 0;
    for i in a.iter() {
        inv += b.count_below(i);
    }
    inv % 2 == 1
}

/// Which ring an ideal or module lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    E,
    S,
}

/// A squarefree monomial ideal, kept as its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    pub side: Side,
    pub d: usize,
    gens: Vec<Subset>,
}

impl MonomialIdeal {
    pub fn new(side: Side, d: usize, gens: impl IntoIterator<Item = Subset>) -> Self {
        let mut all: Vec<Subset> = gens.into_iter().collect();
        all.sort_by_key(|s| (s.len(), s.0));
        all.dedup();
        let mut min: Vec<Subset> = Vec::new();
        for g in all {
            if !min.iter().any(|m| m.is_subset_of(g)) {
                min.push(g);
            }
        }
        Self { side, d, gens: min }
    }

    pub fn zero(side: Side, d: usize) -> Self {
        Self::new(side, d, [])
    }

    pub fn maximal(side: Side, d: usize) -> Self {
        Self::new(side, d, (0..d).map(|i| Subset::EMPTY.with(i)))
    }

    pub fn generators(&self) -> &[Subset] {
        &self.gens
    }

    /// Whether the squarefree monomial on `set` lies in the ideal.
    pub fn contains(&self, set: Subset) -> bool {
        self.gens.iter().any(|g| g.is_subset_of(set))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }
}

/// Graded Betti numbers `beta^{i,a}`, with `i <= 0` for modules.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BettiTable {
    entries: BTreeMap<(i32, Multidegree), usize>,
}

#[derive(Serialize, Deserialize)]
struct BettiEntryJson {
    i: i32,
    deg: Multidegree,
    mult: usize,
}

#[derive(Serialize, Deserialize)]
struct BettiJson {
    entries: Vec<BettiEntryJson>,
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, i: i32, a: Multidegree, mult: usize) {
        if mult == 0 {
            return;
        }
        *self.entries.entry((i, a)).or_insert(0) += mult;
    }

    pub fn get(&self, i: i32, a: &Multidegree) -> usize {
        self.entries.get(&(i, *a)).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, Multidegree, usize)> + '_ {
        self.entries.iter().map(|(&(i, a), &m)| (i, a, m))
    }

    /// Coarsened `beta^{i,j} = sum over |a| = j`.
    pub fn coarse(&self, i: i32, j: i32) -> usize {
        self.iter()
            .filter(|(k, a, _)| *k == i && a.total() == j)
            .map(|(_, _, m)| m)
            .sum()
    }

    pub fn coarse_table(&self) -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for (i, a, m) in self.iter() {
            *out.entry((i, a.total())).or_insert(0) += m;
        }
        out
    }

    /// `max { i + |a| }` over nonzero entries; `None` stands for minus infinity.
    pub fn reg(&self) -> Option<i32> {
        self.iter().map(|(i, a, _)| i + a.total()).max()
    }

    /// `min { i + |a| }`; `None` for the empty table.
    pub fn iota(&self) -> Option<i32> {
        self.iter().map(|(i, a, _)| i + a.total()).min()
    }

    /// Every entry satisfies `i + |a| = l` (the empty table counts as linear).
    pub fn is_linear(&self, l: i32) -> bool {
        self.iter().all(|(i, a, _)| i + a.total() == l)
    }

    /// Smallest cohomological index carrying an entry (minus the projective dimension).
    pub fn min_spot(&self) -> Option<i32> {
        self.entries.keys().map(|(i, _)| *i).min()
    }

    pub fn max_spot(&self) -> Option<i32> {
        self.entries.keys().map(|(i, _)| *i).max()
    }

    /// Entries with `i` in the given inclusive range.
    pub fn restrict_spots(&self, lo: i32, hi: i32) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|((i, _), _)| *i >= lo && *i <= hi)
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    /// Shift every entry: `(i, a) -> (i + di, a + da)`.
    pub fn shifted(&self, di: i32, da: Multidegree) -> Self {
        let mut t = Self::new();
        for (i, a, m) in self.iter() {
            t.add(i + di, a + da, m);
        }
        t
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = BettiJson {
            entries: self
                .iter()
                .map(|(i, deg, mult)| BettiEntryJson { i, deg, mult })
                .collect(),
        };
        serde_json::to_value(j).expect("betti table serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let j: BettiJson = serde_json::from_value(v.clone()).ok()?;
        let mut t = Self::new();
        for e in j.entries {
            t.add(e.i, e.deg, e.mult);
        }
        Some(t)
    }

    /// Macaulay-style grid: column `t = -i`, row `i + j`; the entry is the
    /// coarsened `beta^{i,j}`.
    pub fn pretty(&self) -> String {
        let coarse = self.coarse_table();
        if coarse.is_empty() {
            return "0\n".to_string();
        }
        let tmin = coarse.keys().map(|(i, _)| -i).min().unwrap();
        let tmax = coarse.keys().map(|(i, _)| -i).max().unwrap();
        let rmin = coarse.keys().map(|(i, j)| i + j).min().unwrap();
        let rmax = coarse.keys().map(|(i, j)| i + j).max().unwrap();
        let width = coarse
            .values()
            .map(|m| m.to_string().len())
            .max()
            .unwrap_or(1)
            .max(tmax.to_string().len())
            .max(tmin.to_string().len());
        let label = (rmin.to_string().len()).max(rmax.to_string().len()).max(1);
        let mut s = format!("{:>label$}:", "");
        for t in tmin..=tmax {
            s.push_str(&format!(" {:>width$}", t));
        }
        s.push('\n');
        for r in rmin..=rmax {
            s.push_str(&format!("{:>label$}:", r));
            for t in tmin..=tmax {
                let i = -t;
                let j = r - i;
                match coarse.get(&(i, j)) {
                    Some(m) => s.push_str(&format!(" {:>width$}", m)),
                    None => s.push_str(&format!(" {:>width$}", ".")),
                }
            }
            s.push('\n');
        }
        s
    }
}

/// An axis-aligned box `[lo, hi]` in `Z^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBox {
    pub lo: Multidegree,
    pub hi: Multidegree,
}

impl DegreeBox {
    pub fn new(lo: Multidegree, hi: Multidegree) -> Self {
        Self { lo, hi }
    }

    pub fn squarefree(d: usize) -> Self {
        Self::new(Multidegree::zero(d), Multidegree::ones(d))
    }

    /// Smallest box containing all the given degrees.
    pub fn hull<'a>(d: usize, degs: impl IntoIterator<Item = &'a Multidegree>) -> Option<Self> {
        let mut it = degs.into_iter();
        let first = *it.next()?;
        let mut b = Self::new(first, first);
        for a in it {
            b.lo = b.lo.componentwise_min(a);
            b.hi = b.hi.componentwise_max(a);
        }
        debug_assert_eq!(b.lo.nvars(), d);
        Some(b)
    }

    pub fn contains(&self, a: &Multidegree) -> bool {
        self.lo.leq(a) && a.leq(&self.hi)
    }

    pub fn is_empty(&self) -> bool {
        !self.lo.leq(&self.hi)
    }

    pub fn size(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        (0..self.lo.nvars())
            .map(|i| (self.hi.get(i) - self.lo.get(i) + 1) as usize)
            .product()
    }

    /// All points, in lexicographic order.
    pub fn points(&self) -> Vec<Multidegree> {
        let mut out = Vec::with_capacity(self.size());
        if self.is_empty() {
            return out;
        }
        let d = self.lo.nvars();
        let mut cur = self.lo;
        loop {
            out.push(cur);
            let mut k = d;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if cur.get(k) < self.hi.get(k) {
                    cur = cur.plus_unit(k);
                    for j in k + 1..d {
                        cur = cur.with(j, self.lo.get(j));
                    }
                    break;
                }
            }
        }
    }

    /// Clamp a degree into the box from above (coordinates past `hi` are
    /// lowered to `hi`). Lower coordinates are left alone.
    pub fn clamp_above(&self, a: &Multidegree) -> Multidegree {
        a.componentwise_min(&self.hi)
    }

    #[must_use]
    pub fn widen_down(&self, by: i32) -> Self {
        Self::new(self.lo - Multidegree::splat(self.lo.nvars(), by), self.hi)
    }
}

/// `C(n, k)` for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Rationals;

    #[test]
    fn alpha_sign_examples() {
        // 1-based i=1, F={2,3}
        assert!(!alpha_is_negative(0, Subset::from_indices(&[1, 2])));
        // i=3, F={1,2}
        assert!(!alpha_is_negative(2, Subset::from_indices(&[0, 1])));
        // i=2, F={1}
        assert!(alpha_is_negative(1, Subset::from_indices(&[0])));
        let f = Rationals;
        assert_eq!(alpha_sign(&f, 1, Subset::from_indices(&[0])), f.from_i64(-1));
    }

    #[test]
    fn alpha_cocycle_exhaustive() {
        for d in 1..=6 {
            for set in Subset::all(d) {
                for i in 0..d {
                    for j in 0..d {
                        if i == j || set.contains(i) || set.contains(j) {
                            continue;
                        }
                        let lhs = set.count_below(i) + set.with(i).count_below(j);
                        let rhs = set.count_below(j) + set.with(j).count_below(i) + 1;
                        assert_eq!(lhs % 2, rhs % 2);
                    }
                }
            }
        }
    }

    #[test]
    fn ideal_minimalizes() {
        let s = |v: &[usize]| Subset::from_indices(v);
        let i = MonomialIdeal::new(Side::S, 3, [s(&[0, 1]), s(&[0]), s(&[1, 2]), s(&[0, 2])]);
        assert_eq!(i.generators(), &[s(&[0]), s(&[1, 2])]);
        assert!(i.contains(s(&[0, 2])));
        assert!(!i.contains(s(&[1])));
    }

    #[test]
    fn betti_reg_examples() {
        let mut k = BettiTable::new();
        for set in Subset::all(2) {
            k.add(-(set.len() as i32), set.to_degree(2), 1);
        }
        assert_eq!(k.reg(), Some(0));
        assert_eq!(k.coarse(-1, 1), 2);
        let mut free = BettiTable::new();
        free.add(0, Subset::from_indices(&[0, 1]).to_degree(3), 1);
        assert_eq!(free.reg(), Some(2));
        assert_eq!(BettiTable::new().reg(), None);
        assert!(k.iota().unwrap() <= k.reg().unwrap());
    }

    #[test]
    fn betti_json_roundtrip() {
        let mut t = BettiTable::new();
        t.add(-1, Multidegree::from_slice(&[1, 1, 0]), 1);
        let j = t.to_json();
        assert_eq!(
            j.to_string(),
            r#"{"entries":[{"i":-1,"deg":[1,1,0],"mult":1}]}"#
        );
        assert_eq!(BettiTable::from_json(&j), Some(t));
    }

    #[test]
    fn box_points() {
        let b = DegreeBox::new(Multidegree::from_slice(&[-1, 0]), Multidegree::from_slice(&[0, 1]));
        assert_eq!(b.size(), 4);
        assert_eq!(b.points().len(), 4);
        assert_eq!(DegreeBox::squarefree(3).points().len(), 8);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 4), 0);
    }
}
