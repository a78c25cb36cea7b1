//! Finite carriers: table-backed posets and lattices, a bit-mask powerset,
//! and signed-literal sets under the definedness order.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest carrier a table-backed order will materialize.
pub const MAX_TABLE_CARRIER: usize = 64;

/// Largest label universe for [`PowersetLattice`]; elements are `u32` masks.
pub const MAX_POWERSET_LABELS: usize = 20;

/// A finite partial order.
///
/// `leq` must be reflexive, antisymmetric and transitive; table-backed
/// carriers validate this at construction.
pub trait Poset {
    type Elem: Clone + Ord + fmt::Debug;

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// How many steps a monotone fixedpoint iteration may take before it must
    /// have stabilized. Exceeding it signals a defective input function.
    fn iteration_bound(&self) -> usize;

    /// Human-readable form of an element.
    fn render(&self, x: &Self::Elem) -> String;
}

/// Partial order with a least element and joins, possibly partial.
pub trait Cpo: Poset {
    fn bottom(&self) -> Self::Elem;

    /// Least upper bound; fails where none exists.
    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
}

/// Partial order with all binary meets.
pub trait MeetSemilattice: Poset {
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
}

/// Order small enough to walk element by element, in a fixed sequence.
pub trait Enumerable: Poset {
    fn size(&self) -> usize;
    fn elem_at(&self, index: usize) -> Self::Elem;
    fn index_of(&self, x: &Self::Elem) -> usize;

    fn elements(&self) -> Vec<Self::Elem> {
        (0..self.size()).map(|i| self.elem_at(i)).collect()
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Finite poset over indices `0..n` with an explicit relation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<bool>, // row-major n*n
}

impl FinitePoset {
    /// Builds a poset from any generating set of `x <= y` pairs. The relation
    /// is closed reflexively and transitively, then checked for antisymmetry.
    pub fn new<S: Into<String>>(labels: Vec<S>, pairs: &[(usize, usize)]) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        if n > MAX_TABLE_CARRIER {
            return Err(Error::CarrierTooLarge { size: n, bound: MAX_TABLE_CARRIER });
        }
        check_labels(&labels)?;
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(x, y) in pairs {
            if x >= n {
                return Err(Error::UnknownElement { index: x, size: n });
            }
            if y >= n {
                return Err(Error::UnknownElement { index: y, size: n });
            }
            leq[x * n + y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::NotAPartialOrder(format!(
                        "{} and {} are below each other",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(FinitePoset { labels, leq })
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// `leq` with carrier membership checked.
    pub fn leq_checked(&self, x: usize, y: usize) -> Result<bool> {
        let n = self.labels.len();
        if x >= n {
            return Err(Error::UnknownElement { index: x, size: n });
        }
        if y >= n {
            return Err(Error::UnknownElement { index: y, size: n });
        }
        Ok(self.leq[x * n + y])
    }

    /// The least element, when one exists.
    pub fn least(&self) -> Option<usize> {
        let n = self.labels.len();
        (0..n).find(|&b| (0..n).all(|x| self.leq[b * n + x]))
    }
}

impl Poset for FinitePoset {
    type Elem = usize;

    fn leq(&self, x: &usize, y: &usize) -> bool {
        self.leq[x * self.labels.len() + y]
    }

    fn iteration_bound(&self) -> usize {
        self.labels.len() + 1
    }

    fn render(&self, x: &usize) -> String {
        self.labels[*x].clone()
    }
}

impl Enumerable for FinitePoset {
    fn size(&self) -> usize {
        self.labels.len()
    }

    fn elem_at(&self, index: usize) -> usize {
        index
    }

    fn index_of(&self, x: &usize) -> usize {
        *x
    }
}

/// Finite lattice over indices `0..n`: the relation plus join and meet
/// tables and bottom/top, all computed and validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    name: String,
    poset: FinitePoset,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds a lattice from generating `x <= y` pairs; fails when some pair
    /// of elements has no least upper or greatest lower bound.
    pub fn from_leq<S: Into<String>>(
        name: &str,
        labels: Vec<S>,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let poset = FinitePoset::new(labels, pairs)?;
        let n = poset.size();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        let mut join = vec![0usize; n * n];
        let mut meet = vec![0usize; n * n];
        for x in 0..n {
            for y in 0..n {
                join[x * n + y] = Self::bound_of(&poset, x, y, true)?;
                meet[x * n + y] = Self::bound_of(&poset, x, y, false)?;
            }
        }
        let bottom = (1..n).fold(0, |acc, x| meet[acc * n + x]);
        let top = (1..n).fold(0, |acc, x| join[acc * n + x]);
        Ok(FiniteLattice { name: name.into(), poset, join, meet, bottom, top })
    }

    // In a finite poset a unique minimal upper bound is the least one, and
    // dually for lower bounds.
    fn bound_of(poset: &FinitePoset, x: usize, y: usize, upper: bool) -> Result<usize> {
        let n = poset.size();
        let within = |a: usize, b: usize| {
            if upper {
                poset.leq(&a, &b)
            } else {
                poset.leq(&b, &a)
            }
        };
        let bounds: Vec<usize> = (0..n).filter(|&z| within(x, z) && within(y, z)).collect();
        let extremal: Vec<usize> = bounds
            .iter()
            .copied()
            .filter(|&z| bounds.iter().all(|&w| w == z || !within(w, z)))
            .collect();
        match extremal[..] {
            [z] => Ok(z),
            _ => Err(Error::NotALattice(format!(
                "{} and {} have no {}",
                poset.label(x),
                poset.label(y),
                if upper { "join" } else { "meet" }
            ))),
        }
    }

    /// Total order `1 < 2 < ... < n`.
    pub fn chain(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Self::from_leq(&format!("chain({n})"), labels, &pairs)
    }

    /// Lattice of subsets of `k` generators, ordered by inclusion.
    pub fn boolean(k: usize) -> Result<Self> {
        const GENERATORS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
        if k > GENERATORS.len() {
            return Err(Error::CarrierTooLarge { size: 1 << k, bound: MAX_TABLE_CARRIER });
        }
        let n = 1usize << k;
        let labels: Vec<String> = (0..n)
            .map(|mask| {
                let names: Vec<&str> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| GENERATORS[b]).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        let mut pairs = Vec::new();
        for s in 0..n {
            for t in 0..n {
                if s & t == s {
                    pairs.push((s, t));
                }
            }
        }
        Self::from_leq(&format!("boolean({k})"), labels, &pairs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn label(&self, i: usize) -> &str {
        self.poset.label(i)
    }

    pub fn bottom_elem(&self) -> usize {
        self.bottom
    }

    pub fn top_elem(&self) -> usize {
        self.top
    }

    /// `leq` with carrier membership checked.
    pub fn leq_checked(&self, x: usize, y: usize) -> Result<bool> {
        self.poset.leq_checked(x, y)
    }
}

impl Poset for FiniteLattice {
    type Elem = usize;

    fn leq(&self, x: &usize, y: &usize) -> bool {
        self.poset.leq(x, y)
    }

    fn iteration_bound(&self) -> usize {
        self.poset.iteration_bound()
    }

    fn render(&self, x: &usize) -> String {
        self.poset.render(x)
    }
}

impl Cpo for FiniteLattice {
    fn bottom(&self) -> usize {
        self.bottom
    }

    fn join(&self, x: &usize, y: &usize) -> Result<usize> {
        Ok(self.join[x * self.poset.size() + y])
    }
}

impl MeetSemilattice for FiniteLattice {
    fn meet(&self, x: &usize, y: &usize) -> usize {
        self.meet[x * self.poset.size() + y]
    }
}

impl Enumerable for FiniteLattice {
    fn size(&self) -> usize {
        self.poset.size()
    }

    fn elem_at(&self, index: usize) -> usize {
        index
    }

    fn index_of(&self, x: &usize) -> usize {
        *x
    }
}

/// Powerset of up to [`MAX_POWERSET_LABELS`] labels. An element is a `u32`
/// bit mask; no tables are materialized, so the carrier may have up to 2^20
/// elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowersetLattice {
    labels: Vec<String>,
}

impl PowersetLattice {
    pub fn new<S: Into<String>>(labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_POWERSET_LABELS {
            return Err(Error::CarrierTooLarge {
                size: labels.len(),
                bound: MAX_POWERSET_LABELS,
            });
        }
        check_labels(&labels)?;
        Ok(PowersetLattice { labels })
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn top(&self) -> u32 {
        ((1u64 << self.labels.len()) - 1) as u32
    }

    /// The mask holding exactly the named labels.
    pub fn mask_of(&self, names: &[&str]) -> Result<u32> {
        let mut mask = 0u32;
        for name in names {
            let bit = self
                .labels
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| Error::UnknownLabel((*name).to_string()))?;
            mask |= 1 << bit;
        }
        Ok(mask)
    }
}

impl Poset for PowersetLattice {
    type Elem = u32;

    fn leq(&self, x: &u32, y: &u32) -> bool {
        x & !y == 0
    }

    fn iteration_bound(&self) -> usize {
        self.labels.len() + 1
    }

    fn render(&self, x: &u32) -> String {
        let names: Vec<&str> = (0..self.labels.len())
            .filter(|b| x >> b & 1 == 1)
            .map(|b| self.labels[b].as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }
}

impl Cpo for PowersetLattice {
    fn bottom(&self) -> u32 {
        0
    }

    fn join(&self, x: &u32, y: &u32) -> Result<u32> {
        Ok(x | y)
    }
}

impl MeetSemilattice for PowersetLattice {
    fn meet(&self, x: &u32, y: &u32) -> u32 {
        x & y
    }
}

impl Enumerable for PowersetLattice {
    fn size(&self) -> usize {
        1usize << self.labels.len()
    }

    fn elem_at(&self, index: usize) -> u32 {
        index as u32
    }

    fn index_of(&self, x: &u32) -> usize {
        *x as usize
    }
}

/// Subset lattice over members `0..member_count`, backed by ordinary sets.
/// The wide-universe counterpart of [`PowersetLattice`]: never enumerated,
/// so the universe may be as large as the atom bound allows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetLattice {
    member_count: usize,
}

impl SubsetLattice {
    pub fn new(member_count: usize) -> Self {
        SubsetLattice { member_count }
    }

    pub fn member_count(&self) -> usize {
        self.member_count
    }
}

impl Poset for SubsetLattice {
    type Elem = BTreeSet<u32>;

    fn leq(&self, x: &BTreeSet<u32>, y: &BTreeSet<u32>) -> bool {
        x.is_subset(y)
    }

    fn iteration_bound(&self) -> usize {
        self.member_count + 1
    }

    fn render(&self, x: &BTreeSet<u32>) -> String {
        let parts: Vec<String> = x.iter().map(|a| a.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl Cpo for SubsetLattice {
    fn bottom(&self) -> BTreeSet<u32> {
        BTreeSet::new()
    }

    fn join(&self, x: &BTreeSet<u32>, y: &BTreeSet<u32>) -> Result<BTreeSet<u32>> {
        Ok(x.union(y).copied().collect())
    }
}

impl MeetSemilattice for SubsetLattice {
    fn meet(&self, x: &BTreeSet<u32>, y: &BTreeSet<u32>) -> BTreeSet<u32> {
        x.intersection(y).copied().collect()
    }
}

/// Consistent set of signed literals over atoms `0..atom_count`; `pos` and
/// `neg` never intersect.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct SignedSet {
    pub pos: BTreeSet<u32>,
    pub neg: BTreeSet<u32>,
}

impl SignedSet {
    pub fn new() -> Self {
        SignedSet::default()
    }

    pub fn from_parts(pos: BTreeSet<u32>, neg: BTreeSet<u32>) -> Result<Self> {
        if let Some(a) = pos.intersection(&neg).next() {
            return Err(Error::InconsistentJoin(format!("atom {a}")));
        }
        Ok(SignedSet { pos, neg })
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    /// Atoms carrying a literal of either sign.
    pub fn atoms(&self) -> BTreeSet<u32> {
        self.pos.union(&self.neg).copied().collect()
    }

    pub fn mentions(&self, atom: u32) -> bool {
        self.pos.contains(&atom) || self.neg.contains(&atom)
    }

    /// Definedness order: more literals means more defined.
    pub fn leq(&self, other: &SignedSet) -> bool {
        self.pos.is_subset(&other.pos) && self.neg.is_subset(&other.neg)
    }

    /// Union of both parts; fails when a complementary pair would result.
    pub fn union(&self, other: &SignedSet) -> Result<SignedSet> {
        SignedSet::from_parts(
            self.pos.union(&other.pos).copied().collect(),
            self.neg.union(&other.neg).copied().collect(),
        )
    }

    pub fn intersection(&self, other: &SignedSet) -> SignedSet {
        SignedSet {
            pos: self.pos.intersection(&other.pos).copied().collect(),
            neg: self.neg.intersection(&other.neg).copied().collect(),
        }
    }
}

/// Domain of consistent [`SignedSet`]s over a fixed atom universe, ordered
/// by definedness. Joins exist exactly for consistent unions, so this is a
/// CPO rather than a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralSets {
    atom_count: usize,
}

impl LiteralSets {
    pub fn new(atom_count: usize) -> Self {
        LiteralSets { atom_count }
    }
}

impl Poset for LiteralSets {
    type Elem = SignedSet;

    fn leq(&self, x: &SignedSet, y: &SignedSet) -> bool {
        x.leq(y)
    }

    fn iteration_bound(&self) -> usize {
        self.atom_count + 1
    }

    fn render(&self, x: &SignedSet) -> String {
        let mut parts: Vec<String> = x.pos.iter().map(|a| a.to_string()).collect();
        parts.extend(x.neg.iter().map(|a| format!("~{a}")));
        format!("{{{}}}", parts.join(","))
    }
}

impl Cpo for LiteralSets {
    fn bottom(&self) -> SignedSet {
        SignedSet::new()
    }

    fn join(&self, x: &SignedSet, y: &SignedSet) -> Result<SignedSet> {
        x.union(y)
    }
}

impl MeetSemilattice for LiteralSets {
    fn meet(&self, x: &SignedSet, y: &SignedSet) -> SignedSet {
        x.intersection(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(atoms: &[u32]) -> BTreeSet<u32> {
        atoms.iter().copied().collect()
    }

    #[test]
    fn chain_orders_totally() {
        let c = FiniteLattice::chain(3).unwrap();
        assert_eq!(c.name(), "chain(3)");
        assert_eq!(c.size(), 3);
        assert!(c.leq(&0, &1));
        assert!(c.leq(&0, &2));
        assert!(!c.leq(&2, &1));
        assert_eq!(c.bottom_elem(), 0);
        assert_eq!(c.top_elem(), 2);
        assert_eq!(c.join(&0, &2).unwrap(), 2);
        assert_eq!(c.meet(&1, &2), 1);
        assert_eq!(c.render(&0), "1");
        assert_eq!(c.render(&2), "3");
    }

    #[test]
    fn boolean_two_is_the_diamond() {
        let b = FiniteLattice::boolean(2).unwrap();
        assert_eq!(b.size(), 4);
        // 1 = {a} and 2 = {b} are incomparable middles.
        assert!(!b.leq(&1, &2));
        assert!(!b.leq(&2, &1));
        assert_eq!(b.join(&1, &2).unwrap(), 3);
        assert_eq!(b.meet(&1, &2), 0);
        assert_eq!(b.bottom_elem(), 0);
        assert_eq!(b.top_elem(), 3);
        assert_eq!(b.render(&3), "{a,b}");
    }

    #[test]
    fn chain_of_zero_is_rejected() {
        assert_eq!(FiniteLattice::chain(0), Err(Error::EmptyCarrier));
    }

    #[test]
    fn pentagon_is_a_lattice() {
        // bottom, a < c, b, top with a,b and b,c incomparable
        let n5 = FiniteLattice::from_leq(
            "n5",
            vec!["bot", "a", "b", "c", "top"],
            &[(0, 1), (0, 2), (1, 3), (3, 4), (2, 4)],
        )
        .unwrap();
        assert_eq!(n5.join(&1, &2).unwrap(), 4);
        assert_eq!(n5.meet(&3, &2), 0);
        assert_eq!(n5.bottom_elem(), 0);
        assert_eq!(n5.top_elem(), 4);
    }

    #[test]
    fn vee_has_no_meet_for_the_feet() {
        // a, b < c: the pair {a,b} has no lower bound at all.
        let err = FiniteLattice::from_leq("v", vec!["a", "b", "c"], &[(0, 2), (1, 2)]);
        assert!(matches!(err, Err(Error::NotALattice(_))));
    }

    #[test]
    fn cycles_are_rejected() {
        let err = FinitePoset::new(vec!["x", "y"], &[(0, 1), (1, 0)]);
        assert!(matches!(err, Err(Error::NotAPartialOrder(_))));
    }

    #[test]
    fn unknown_indices_are_reported() {
        let p = FinitePoset::new(vec!["x", "y"], &[(0, 1)]).unwrap();
        assert_eq!(p.leq_checked(0, 5), Err(Error::UnknownElement { index: 5, size: 2 }));
        assert_eq!(p.leq_checked(0, 1), Ok(true));
        assert_eq!(p.leq_checked(1, 0), Ok(false));
    }

    #[test]
    fn lattice_laws_hold_on_small_carriers() {
        let mut menu = vec![
            FiniteLattice::chain(1).unwrap(),
            FiniteLattice::chain(4).unwrap(),
            FiniteLattice::boolean(2).unwrap(),
        ];
        menu.push(
            FiniteLattice::from_leq(
                "n5",
                vec!["bot", "a", "b", "c", "top"],
                &[(0, 1), (0, 2), (1, 3), (3, 4), (2, 4)],
            )
            .unwrap(),
        );
        for l in &menu {
            let n = l.size();
            for x in 0..n {
                assert_eq!(l.join(&x, &x).unwrap(), x);
                assert!(l.leq(&l.bottom_elem(), &x));
                assert!(l.leq(&x, &l.top_elem()));
                for y in 0..n {
                    let xy = l.join(&x, &y).unwrap();
                    assert_eq!(xy, l.join(&y, &x).unwrap());
                    assert_eq!(l.leq(&x, &y), xy == y);
                    assert_eq!(l.meet(&x, &y), l.meet(&y, &x));
                    for z in 0..n {
                        let a = l.join(&xy, &z).unwrap();
                        let b = l.join(&x, &l.join(&y, &z).unwrap()).unwrap();
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn powerset_matches_set_operations() {
        let p = PowersetLattice::new(vec!["a", "b", "c", "d"]).unwrap();
        assert_eq!(p.size(), 16);
        for x in 0u32..16 {
            for y in 0u32..16 {
                let xs: BTreeSet<u32> = (0..4).filter(|b| x >> b & 1 == 1).collect();
                let ys: BTreeSet<u32> = (0..4).filter(|b| y >> b & 1 == 1).collect();
                let union: u32 = xs.union(&ys).map(|b| 1 << b).sum();
                let inter: u32 = xs.intersection(&ys).map(|b| 1 << b).sum();
                assert_eq!(p.join(&x, &y).unwrap(), union);
                assert_eq!(p.meet(&x, &y), inter);
                assert_eq!(p.leq(&x, &y), xs.is_subset(&ys));
            }
        }
    }

    #[test]
    fn powerset_examples() {
        let p = PowersetLattice::new(vec!["a", "b"]).unwrap();
        let a = p.mask_of(&["a"]).unwrap();
        let ab = p.mask_of(&["a", "b"]).unwrap();
        let b = p.mask_of(&["b"]).unwrap();
        assert!(p.leq(&a, &ab));
        assert!(!p.leq(&a, &b));
        assert_eq!(p.render(&ab), "{a,b}");

        let empty = PowersetLattice::new(Vec::<String>::new()).unwrap();
        assert_eq!(empty.size(), 1);
        assert_eq!(empty.bottom(), empty.top());

        let big: Vec<String> = (0..21).map(|i| format!("l{i}")).collect();
        assert_eq!(
            PowersetLattice::new(big),
            Err(Error::CarrierTooLarge { size: 21, bound: MAX_POWERSET_LABELS })
        );
    }

    #[test]
    fn signed_sets_join_when_consistent() {
        let d = LiteralSets::new(4);
        let x = SignedSet::from_parts(set(&[0]), set(&[])).unwrap();
        let y = SignedSet::from_parts(set(&[]), set(&[1])).unwrap();
        let xy = d.join(&x, &y).unwrap();
        assert_eq!(xy.pos, set(&[0]));
        assert_eq!(xy.neg, set(&[1]));
        assert!(d.leq(&x, &xy));
        assert!(d.leq(&y, &xy));

        let z = SignedSet::from_parts(set(&[1]), set(&[])).unwrap();
        assert_eq!(d.join(&y, &z), Err(Error::InconsistentJoin("atom 1".into())));

        assert!(SignedSet::from_parts(set(&[2]), set(&[2])).is_err());
        assert_eq!(d.meet(&xy, &z), SignedSet::new());
    }

    #[test]
    fn subset_lattice_behaves_like_sets() {
        let d = SubsetLattice::new(8);
        let x = set(&[1, 2]);
        let y = set(&[2, 5]);
        assert_eq!(d.join(&x, &y).unwrap(), set(&[1, 2, 5]));
        assert_eq!(d.meet(&x, &y), set(&[2]));
        assert!(d.leq(&set(&[2]), &y));
        assert!(!d.leq(&x, &y));
        assert_eq!(d.render(&x), "{1,2}");
    }
}
