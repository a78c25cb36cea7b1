//! Exhaustive enumeration of function spaces on small lattices, and census
//! runs of the factorization and sandwich laws over them. Everything here
//! is deterministic: functions enumerate in lexicographic table order and
//! galleries keep the first entries in that order.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ops::{
    check_closure_factorization, check_sandwich, EndoFn, FixedpointSets, PartVerdict,
    FACTORIZATION_PARTS, SANDWICH_PARTS,
};
use crate::order::{Enumerable, FiniteLattice, Poset, PowersetLattice};
use crate::{Error, Result};

/// Largest carrier for which all self-maps are enumerated.
pub const ALL_FUNCTIONS_BUDGET: usize = 3;

/// Largest carrier for a monotone-only sandwich census.
pub const SANDWICH_MONOTONE_BUDGET: usize = 4;

/// Largest carrier for which monotone function spaces are enumerated.
pub const MONOTONE_BUDGET: usize = 6;

/// Gallery entries kept per part name.
pub const GALLERY_CAP: usize = 10;

fn check_budget(size: usize, bound: usize) -> Result<()> {
    if size > bound {
        return Err(Error::BudgetExceeded { size, bound });
    }
    Ok(())
}

/// Indices sorted so that every element comes after everything below it.
fn linear_extension(lat: &FiniteLattice) -> Vec<usize> {
    let n = lat.size();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (0..n).filter(|&z| lat.leq(&z, &x)).count());
    order
}

fn enumerate_tables(lat: &FiniteLattice, monotone: bool, increasing: bool) -> Vec<Vec<usize>> {
    let n = lat.size();
    let ext = linear_extension(lat);
    let mut table = alloc::vec![usize::MAX; n];
    let mut out = Vec::new();
    dfs(lat, &ext, 0, &mut table, &mut out, monotone, increasing);
    out.sort();
    out
}

fn dfs(
    lat: &FiniteLattice,
    ext: &[usize],
    k: usize,
    table: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    monotone: bool,
    increasing: bool,
) {
    if k == ext.len() {
        out.push(table.clone());
        return;
    }
    let e = ext[k];
    'candidates: for v in 0..ext.len() {
        if increasing && !lat.leq(&e, &v) {
            continue;
        }
        if monotone {
            // Every element below e was assigned earlier in the extension.
            for &p in &ext[..k] {
                if lat.leq(&p, &e) && !lat.leq(&table[p], &v) {
                    continue 'candidates;
                }
            }
        }
        table[e] = v;
        dfs(lat, ext, k + 1, table, out, monotone, increasing);
        table[e] = usize::MAX;
    }
}

fn to_fns(lat: &FiniteLattice, tables: Vec<Vec<usize>>) -> Result<Vec<EndoFn<'_, FiniteLattice>>> {
    tables.into_iter().map(|t| EndoFn::from_table(lat, t)).collect()
}

/// All self-maps, in lexicographic table order.
pub fn enumerate_all_functions(lat: &FiniteLattice) -> Result<Vec<EndoFn<'_, FiniteLattice>>> {
    check_budget(lat.size(), ALL_FUNCTIONS_BUDGET)?;
    to_fns(lat, enumerate_tables(lat, false, false))
}

/// All monotone self-maps, in lexicographic table order.
pub fn enumerate_monotone(lat: &FiniteLattice) -> Result<Vec<EndoFn<'_, FiniteLattice>>> {
    check_budget(lat.size(), MONOTONE_BUDGET)?;
    to_fns(lat, enumerate_tables(lat, true, false))
}

/// All monotone increasing self-maps, in lexicographic table order.
pub fn enumerate_monotone_increasing(
    lat: &FiniteLattice,
) -> Result<Vec<EndoFn<'_, FiniteLattice>>> {
    check_budget(lat.size(), MONOTONE_BUDGET)?;
    to_fns(lat, enumerate_tables(lat, true, true))
}

fn render_table(lat: &FiniteLattice, table: &[usize]) -> String {
    let cells: Vec<&str> = table.iter().map(|&v| lat.label(v)).collect();
    format!("[{}]", cells.join(" "))
}

/// Running totals for one law part across a census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartTally {
    pub name: &'static str,
    pub hypothesis_held: usize,
    pub conclusion_held: usize,
    pub both_held: usize,
    pub neither_held: usize,
    /// Hypothesis held while the conclusion failed. Always zero; anything
    /// else is a defect in the operators, not in the inputs.
    pub violations: usize,
}

impl PartTally {
    fn new(name: &'static str) -> Self {
        PartTally {
            name,
            hypothesis_held: 0,
            conclusion_held: 0,
            both_held: 0,
            neither_held: 0,
            violations: 0,
        }
    }

    fn record(&mut self, part: &PartVerdict) {
        if part.hypothesis_holds {
            self.hypothesis_held += 1;
        }
        if part.conclusion_holds {
            self.conclusion_held += 1;
        }
        match (part.hypothesis_holds, part.conclusion_holds) {
            (true, true) => self.both_held += 1,
            (true, false) => self.violations += 1,
            (false, false) => self.neither_held += 1,
            (false, true) => {}
        }
    }
}

/// One exhibited case: the function tables involved and the element where
/// the conclusion failed (or the extra fixedpoint, for strict containment).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GalleryEntry {
    pub part: &'static str,
    pub tables: Vec<String>,
    pub witness: String,
}

/// Aggregated outcome of a census run over one carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub carrier: String,
    pub functions: usize,
    pub cases: usize,
    pub parts: Vec<PartTally>,
    /// Cases where hypothesis and conclusion both failed, capped at
    /// [`GALLERY_CAP`] per part, first in enumeration order.
    pub gallery: Vec<GalleryEntry>,
    /// Sandwich censuses only: cases where the bounds share fixedpoints
    /// and the middle function has strictly more.
    pub strict_containments: usize,
}

impl CensusReport {
    /// No part anywhere had its hypothesis hold while its conclusion failed.
    pub fn sound(&self) -> bool {
        self.parts.iter().all(|p| p.violations == 0)
    }

    pub fn part(&self, name: &str) -> &PartTally {
        self.parts.iter().find(|p| p.name == name).expect("unknown part name")
    }

    fn exhibit(&mut self, part: &'static str, tables: Vec<String>, witness: &str) {
        if self.gallery.iter().filter(|e| e.part == part).count() < GALLERY_CAP {
            self.gallery.push(GalleryEntry {
                part,
                tables,
                witness: String::from(witness),
            });
        }
    }
}

/// Runs [`check_closure_factorization`] over every ordered pair of monotone
/// increasing functions on the lattice.
pub fn run_factorization_census(lat: &FiniteLattice) -> Result<CensusReport> {
    let fns = enumerate_monotone_increasing(lat)?;
    let tables: Vec<Vec<usize>> = fns.iter().map(|f| f.table()).collect::<Result<_>>()?;
    let mut report = CensusReport {
        carrier: String::from(lat.name()),
        functions: fns.len(),
        cases: 0,
        parts: FACTORIZATION_PARTS.iter().map(|n| PartTally::new(n)).collect(),
        gallery: Vec::new(),
        strict_containments: 0,
    };
    for (i, f) in fns.iter().enumerate() {
        for (j, g) in fns.iter().enumerate() {
            let verdict = check_closure_factorization(f, g)?;
            report.cases += 1;
            for (tally, part) in report.parts.iter_mut().zip(&verdict.parts) {
                tally.record(part);
            }
            for (slot, part) in FACTORIZATION_PARTS.iter().zip(&verdict.parts) {
                if !part.hypothesis_holds && !part.conclusion_holds {
                    let tables = alloc::vec![
                        render_table(lat, &tables[i]),
                        render_table(lat, &tables[j]),
                    ];
                    let witness = part.witness.as_deref().unwrap_or("");
                    report.exhibit(slot, tables, witness);
                }
            }
        }
    }
    Ok(report)
}

/// Which function space a sandwich census draws its triples from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SandwichMode {
    /// Every self-map; carriers up to [`ALL_FUNCTIONS_BUDGET`] elements.
    AllFunctions,
    /// Monotone self-maps only; carriers up to [`SANDWICH_MONOTONE_BUDGET`].
    MonotoneOnly,
}

/// Runs [`check_sandwich`] over every pointwise-ordered triple `f1 ≤ g ≤ f2`
/// drawn from the mode's function space.
pub fn run_sandwich_census(lat: &FiniteLattice, mode: SandwichMode) -> Result<CensusReport> {
    let fns = match mode {
        SandwichMode::AllFunctions => {
            check_budget(lat.size(), ALL_FUNCTIONS_BUDGET)?;
            enumerate_all_functions(lat)?
        }
        SandwichMode::MonotoneOnly => {
            check_budget(lat.size(), SANDWICH_MONOTONE_BUDGET)?;
            enumerate_monotone(lat)?
        }
    };
    let tables: Vec<Vec<usize>> = fns.iter().map(|f| f.table()).collect::<Result<_>>()?;
    let below = |a: &[usize], b: &[usize]| a.iter().zip(b).all(|(x, y)| lat.leq(x, y));

    let mut report = CensusReport {
        carrier: String::from(lat.name()),
        functions: fns.len(),
        cases: 0,
        parts: SANDWICH_PARTS.iter().map(|n| PartTally::new(n)).collect(),
        gallery: Vec::new(),
        strict_containments: 0,
    };
    for (i, f1) in fns.iter().enumerate() {
        for (j, g) in fns.iter().enumerate() {
            if !below(&tables[i], &tables[j]) {
                continue;
            }
            for (k, f2) in fns.iter().enumerate() {
                if !below(&tables[j], &tables[k]) {
                    continue;
                }
                let verdict = check_sandwich(f1, g, f2)?;
                report.cases += 1;
                for (tally, part) in report.parts.iter_mut().zip(&verdict.parts) {
                    tally.record(part);
                }
                let triple = || {
                    alloc::vec![
                        render_table(lat, &tables[i]),
                        render_table(lat, &tables[j]),
                        render_table(lat, &tables[k]),
                    ]
                };
                for (slot, part) in SANDWICH_PARTS.iter().zip(&verdict.parts) {
                    if !part.hypothesis_holds && !part.conclusion_holds {
                        let witness = part.witness.as_deref().unwrap_or("");
                        report.exhibit(slot, triple(), witness);
                    }
                }
                if verdict.strict_containment() {
                    report.strict_containments += 1;
                    let extra = verdict
                        .g_sets
                        .fpt
                        .iter()
                        .find(|x| !verdict.f1_sets.fpt.contains(x));
                    if let Some(x) = extra {
                        report.exhibit("fpt-containment-strict", triple(), &lat.render(x));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The decreasing pair on the three-label powerset whose summed downward
/// closure stays at top while the nested closures collapse to bottom; shows
/// that closure of a sum does not factor through nesting on the meet side,
/// even though the pair satisfies the meet-side commutation condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityGapReport {
    pub f_monotone_decreasing: bool,
    pub g_monotone_decreasing: bool,
    /// `f•∘g ≤ g∘f•` pointwise.
    pub condition_holds: bool,
    /// `(f+g)•(⊤)`, expected `{a,b,c}`.
    pub joint_at_top: String,
    /// `f•(g•(⊤))`, expected `{}`.
    pub nested_at_top: String,
    pub as_expected: bool,
}

pub fn duality_gap_example() -> Result<DualityGapReport> {
    let p = PowersetLattice::new(alloc::vec!["a", "b", "c"])?;
    let top = p.top();
    let ab = p.mask_of(&["a", "b"])?;
    let bc = p.mask_of(&["b", "c"])?;
    let f = EndoFn::from_fn(&p, move |&x| if x == top { ab } else { 0 });
    let g = EndoFn::from_fn(&p, move |&x| if x == top { bc } else { 0 });

    let fp = f.classify()?;
    let gp = g.classify()?;
    let mut condition_holds = true;
    for x in p.elements() {
        let lhs = f.down_closure(&g.apply(&x)?)?;
        let rhs = g.apply(&f.down_closure(&x)?)?;
        condition_holds &= p.leq(&lhs, &rhs);
    }
    let joint = f.plus(&g)?.down_closure(&top)?;
    let nested = f.down_closure(&g.down_closure(&top)?)?;
    let report = DualityGapReport {
        f_monotone_decreasing: fp.monotone && fp.decreasing,
        g_monotone_decreasing: gp.monotone && gp.decreasing,
        condition_holds,
        joint_at_top: p.render(&joint),
        nested_at_top: p.render(&nested),
        as_expected: fp.monotone
            && fp.decreasing
            && gp.monotone
            && gp.decreasing
            && condition_holds
            && joint == top
            && nested == 0,
    };
    Ok(report)
}

/// Pre-, post- and fixedpoints of one function, rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetsSummary {
    pub pre: Vec<String>,
    pub post: Vec<String>,
    pub fpt: Vec<String>,
}

fn summarize(lat: &FiniteLattice, sets: &FixedpointSets<usize>) -> SetsSummary {
    let r = |xs: &[usize]| xs.iter().map(|x| lat.render(x)).collect();
    SetsSummary { pre: r(&sets.pre), post: r(&sets.post), fpt: r(&sets.fpt) }
}

/// The three-element chain triple where the identity sits between two
/// bounds that share their fixedpoints yet fixes strictly more: containment
/// of fixedpoint sets is all the sandwich provides, not equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentReport {
    pub f1: SetsSummary,
    pub g: SetsSummary,
    pub f2: SetsSummary,
    pub monotone: bool,
    pub sandwich_holds: bool,
    /// `FPT(f1) = FPT(f2)`.
    pub fpt_agree: bool,
    /// `FPT(g) ⊋ FPT(f1)`.
    pub strict: bool,
    pub as_expected: bool,
}

pub fn strict_containment_example() -> Result<ContainmentReport> {
    let c = FiniteLattice::chain(3)?;
    let f1 = EndoFn::from_table(&c, alloc::vec![0, 0, 2])?;
    let g = EndoFn::identity(&c);
    let f2 = EndoFn::from_table(&c, alloc::vec![0, 2, 2])?;

    let monotone = f1.classify()?.monotone && g.classify()?.monotone && f2.classify()?.monotone;
    let verdict = check_sandwich(&f1, &g, &f2)?;
    let report = ContainmentReport {
        f1: summarize(&c, &verdict.f1_sets),
        g: summarize(&c, &verdict.g_sets),
        f2: summarize(&c, &verdict.f2_sets),
        monotone,
        sandwich_holds: true,
        fpt_agree: verdict.f1_sets.fpt == verdict.f2_sets.fpt,
        strict: verdict.strict_containment(),
        as_expected: monotone
            && verdict.sound()
            && verdict.f1_sets.fpt == alloc::vec![0, 2]
            && verdict.f2_sets.fpt == alloc::vec![0, 2]
            && verdict.g_sets.fpt == alloc::vec![0, 1, 2]
            && verdict.strict_containment(),
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all n^n tables; the ground truth the optimized
    /// enumerators are compared against.
    fn brute_tables(lat: &FiniteLattice, monotone: bool, increasing: bool) -> Vec<Vec<usize>> {
        let n = lat.size();
        let mut out = Vec::new();
        let total = n.pow(n as u32);
        for code in 0..total {
            let mut table = Vec::with_capacity(n);
            let mut rest = code;
            for _ in 0..n {
                table.push(rest % n);
                rest /= n;
            }
            let mono_ok = !monotone
                || (0..n).all(|x| {
                    (0..n).all(|y| !lat.leq(&x, &y) || lat.leq(&table[x], &table[y]))
                });
            let incr_ok = !increasing || (0..n).all(|x| lat.leq(&x, &table[x]));
            if mono_ok && incr_ok {
                out.push(table);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumerators_match_brute_force() {
        for lat in [
            FiniteLattice::chain(2).unwrap(),
            FiniteLattice::chain(3).unwrap(),
            FiniteLattice::chain(4).unwrap(),
            FiniteLattice::boolean(1).unwrap(),
            FiniteLattice::boolean(2).unwrap(),
        ] {
            for (monotone, increasing) in [(true, true), (true, false)] {
                let fast = enumerate_tables(&lat, monotone, increasing);
                assert_eq!(fast, brute_tables(&lat, monotone, increasing), "{}", lat.name());
            }
        }
        let c3 = FiniteLattice::chain(3).unwrap();
        let all: Vec<Vec<usize>> = enumerate_all_functions(&c3)
            .unwrap()
            .iter()
            .map(|f| f.table().unwrap())
            .collect();
        assert_eq!(all, brute_tables(&c3, false, false));
        assert_eq!(all.len(), 27);
    }

    #[test]
    fn monotone_increasing_counts() {
        for (lat, expect) in [
            (FiniteLattice::chain(2).unwrap(), 2),
            (FiniteLattice::chain(3).unwrap(), 5),
            (FiniteLattice::chain(4).unwrap(), 14),
            (FiniteLattice::chain(5).unwrap(), 42),
            (FiniteLattice::boolean(1).unwrap(), 2),
            (FiniteLattice::boolean(2).unwrap(), 9),
        ] {
            assert_eq!(
                enumerate_monotone_increasing(&lat).unwrap().len(),
                expect,
                "{}",
                lat.name()
            );
        }
    }

    #[test]
    fn budgets_are_enforced() {
        let big = FiniteLattice::boolean(3).unwrap();
        assert_eq!(
            enumerate_monotone_increasing(&big).err(),
            Some(Error::BudgetExceeded { size: 8, bound: MONOTONE_BUDGET })
        );
        let c4 = FiniteLattice::chain(4).unwrap();
        assert_eq!(
            enumerate_all_functions(&c4).err(),
            Some(Error::BudgetExceeded { size: 4, bound: ALL_FUNCTIONS_BUDGET })
        );
        assert_eq!(
            run_sandwich_census(&c4, SandwichMode::AllFunctions).err(),
            Some(Error::BudgetExceeded { size: 4, bound: ALL_FUNCTIONS_BUDGET })
        );
        let c5 = FiniteLattice::chain(5).unwrap();
        assert_eq!(
            run_sandwich_census(&c5, SandwichMode::MonotoneOnly).err(),
            Some(Error::BudgetExceeded { size: 5, bound: SANDWICH_MONOTONE_BUDGET })
        );
    }

    #[test]
    fn factorization_census_on_the_three_chain() {
        let c3 = FiniteLattice::chain(3).unwrap();
        let report = run_factorization_census(&c3).unwrap();
        assert_eq!(report.functions, 5);
        assert_eq!(report.cases, 25);
        assert!(report.sound());
        assert_eq!(report.part("sum-vs-composition").conclusion_held, 25);
        assert_eq!(report.part("sum-vs-composition").hypothesis_held, 25);
    }

    #[test]
    fn factorization_census_on_one_element_is_vacuous() {
        let c1 = FiniteLattice::chain(1).unwrap();
        let report = run_factorization_census(&c1).unwrap();
        assert_eq!(report.functions, 1);
        assert_eq!(report.cases, 1);
        for part in &report.parts {
            assert_eq!(part.both_held, 1);
        }
    }

    #[test]
    fn factorization_census_exhibits_the_diamond_gap() {
        let b2 = FiniteLattice::boolean(2).unwrap();
        let report = run_factorization_census(&b2).unwrap();
        assert_eq!(report.cases, 81);
        assert!(report.sound());
        // the add-a / add-b-if-a pair and its mirror live here
        let star = report.part("star-commutation");
        assert!(star.neither_held > 0);
        assert!(report.gallery.iter().any(|e| e.part == "star-commutation"));
        assert_eq!(report, run_factorization_census(&b2).unwrap());
    }

    #[test]
    fn sandwich_census_all_functions_small_chains() {
        let c2 = FiniteLattice::chain(2).unwrap();
        let report = run_sandwich_census(&c2, SandwichMode::AllFunctions).unwrap();
        assert!(report.sound());
        assert_eq!(report.functions, 4);

        let c3 = FiniteLattice::chain(3).unwrap();
        let report = run_sandwich_census(&c3, SandwichMode::AllFunctions).unwrap();
        assert!(report.sound());
        assert_eq!(report.functions, 27);
        // the bounds [1 1 3] and [1 3 3] around the identity appear here
        assert!(report.strict_containments > 0);
        assert_eq!(report, run_sandwich_census(&c3, SandwichMode::AllFunctions).unwrap());
    }

    #[test]
    fn sandwich_census_monotone_mode() {
        let c4 = FiniteLattice::chain(4).unwrap();
        let report = run_sandwich_census(&c4, SandwichMode::MonotoneOnly).unwrap();
        assert!(report.sound());
        assert_eq!(report.functions, 35);

        let b2 = FiniteLattice::boolean(2).unwrap();
        let report = run_sandwich_census(&b2, SandwichMode::MonotoneOnly).unwrap();
        assert!(report.sound());
    }

    #[test]
    fn triples_with_equal_bounds_conclude() {
        let c3 = FiniteLattice::chain(3).unwrap();
        let report = run_sandwich_census(&c3, SandwichMode::AllFunctions).unwrap();
        // f1 = g = f2 triples guarantee at least |fns| cases with both
        // pre and post agreement, all concluded.
        assert!(report.part("pre-agreement").both_held >= 27);
        assert!(report.part("post-agreement").both_held >= 27);
        assert_eq!(report.part("pre-post-agreement").violations, 0);
    }

    #[test]
    fn duality_gap_report_is_exact() {
        let report = duality_gap_example().unwrap();
        assert!(report.as_expected);
        assert_eq!(report.joint_at_top, "{a,b,c}");
        assert_eq!(report.nested_at_top, "{}");
        assert!(report.condition_holds);
    }

    #[test]
    fn strict_containment_report_is_exact() {
        let report = strict_containment_example().unwrap();
        assert!(report.as_expected);
        assert_eq!(report.f1.pre, vec!["1", "2", "3"]);
        assert_eq!(report.f2.pre, vec!["1", "3"]);
        assert_eq!(report.f1.post, vec!["1", "3"]);
        assert_eq!(report.f2.post, vec!["1", "2", "3"]);
        assert_eq!(report.f1.fpt, vec!["1", "3"]);
        assert_eq!(report.f2.fpt, vec!["1", "3"]);
        assert_eq!(report.g.fpt, vec!["1", "2", "3"]);
        assert!(report.strict);
    }

    #[test]
    fn gallery_keeps_the_first_cases_in_enumeration_order() {
        let b2 = FiniteLattice::boolean(2).unwrap();
        let report = run_factorization_census(&b2).unwrap();
        // rebuild the expected selection with a plain loop over the same
        // lexicographic pair order
        let fns = enumerate_monotone_increasing(&b2).unwrap();
        let mut expected = Vec::new();
        for f in &fns {
            for g in &fns {
                let v = check_closure_factorization(f, g).unwrap();
                let p = v.part("star-commutation");
                if !p.hypothesis_holds && !p.conclusion_holds {
                    expected.push((f.table().unwrap(), g.table().unwrap()));
                }
            }
        }
        expected.truncate(GALLERY_CAP);
        let actual: Vec<Vec<String>> = report
            .gallery
            .iter()
            .filter(|e| e.part == "star-commutation")
            .map(|e| e.tables.clone())
            .collect();
        assert!(actual.len() <= GALLERY_CAP);
        assert_eq!(actual.len(), expected.len().min(GALLERY_CAP));
        for (got, (ft, gt)) in actual.iter().zip(&expected) {
            assert_eq!(got[0], render_table(&b2, ft));
            assert_eq!(got[1], render_table(&b2, gt));
        }
    }
}
