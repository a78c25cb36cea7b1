//! Seed-driven generator for layered two-module programs, plus the checks
//! the generated corpus feeds: modular against monolithic evaluation,
//! residual replacement, step-operator monotonicity, and goal wrapping.
//! Everything here is deterministic in the seed.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::logic::{
    wrap_goal, Atom, GroundAtom, Literal, Module, Predicate, Rule, Term, ANSWER_PREDICATE,
};
use crate::order::SignedSet;
use crate::semantics::{
    compare, eval_module, fitting_apply, fitting_lfp, ground_union, partial_eval_check,
    tp_apply, wf, wp_apply, GroundWorld, SemanticsKind, Start,
};
use crate::Result;

/// Splitmix64 stream. Hand-rolled so corpus output stays byte-identical
/// across toolchain and dependency upgrades.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn draw(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform below `n`; the modulo bias is irrelevant at corpus ranges.
    pub fn below(&mut self, n: usize) -> usize {
        (self.draw() % n as u64) as usize
    }

    pub fn chance(&mut self, num: usize, den: usize) -> bool {
        self.below(den) < num
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len())]
    }

    /// Independent child stream.
    pub fn fork(&mut self) -> Rng {
        Rng::new(self.draw())
    }
}

const CONSTANT_POOL: [&str; 4] = ["a", "b", "c", "d"];
const VAR_POOL: [&str; 2] = ["X", "Y"];
const MAX_ASSUMES: usize = 4;

/// One generated program: a base module, a module layered over it, start
/// literals about imported predicates, and a query goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    pub index: usize,
    pub constants: Vec<String>,
    pub base: Module,
    pub dependent: Module,
    pub assume_pos: Vec<GroundAtom>,
    pub assume_neg: Vec<GroundAtom>,
    pub goal: Vec<Literal>,
}

impl CorpusItem {
    pub fn has_negation(&self) -> bool {
        self.dependent.rules.iter().any(Rule::has_negation)
    }

    /// Semantics the item can run under: negation or negative assumptions
    /// rule out the least-model engine.
    pub fn kinds(&self) -> Vec<SemanticsKind> {
        if self.has_negation() || !self.assume_neg.is_empty() {
            vec![SemanticsKind::Fitting, SemanticsKind::WellFounded]
        } else {
            SemanticsKind::ALL.to_vec()
        }
    }

    pub fn modules(&self) -> Vec<Module> {
        vec![self.base.clone(), self.dependent.clone()]
    }

    /// Grounds both modules over the item's full constant pool, so assume
    /// atoms are always inside the universe.
    pub fn world(&self) -> Result<GroundWorld> {
        GroundWorld::build(
            &self.modules(),
            &self.constants.iter().cloned().collect(),
            &BTreeSet::new(),
        )
    }

    pub fn start(&self, world: &GroundWorld) -> Result<Start> {
        let pos = self
            .assume_pos
            .iter()
            .map(|a| world.universe.index_of(a))
            .collect::<Result<BTreeSet<u32>>>()?;
        let neg = self
            .assume_neg
            .iter()
            .map(|a| world.universe.index_of(a))
            .collect::<Result<BTreeSet<u32>>>()?;
        Ok(Start::Literals(SignedSet::from_parts(pos, neg)?))
    }
}

/// `count` items derived from `seed`, one independent stream each.
pub fn generate(seed: u64, count: usize) -> Vec<CorpusItem> {
    let mut master = Rng::new(seed);
    (0..count).map(|index| generate_item(index, master.fork())).collect()
}

fn generate_item(index: usize, mut rng: Rng) -> CorpusItem {
    let constants: Vec<String> =
        CONSTANT_POOL[..2 + rng.below(3)].iter().map(|s| s.to_string()).collect();
    let mut imports = vec![Predicate::new("i0", rng.below(3))];
    if rng.chance(1, 2) {
        imports.push(Predicate::new("i1", rng.below(3)));
    }
    let mut base_defs = vec![Predicate::new("q0", rng.below(3))];
    if rng.chance(1, 2) {
        base_defs.push(Predicate::new("q1", rng.below(3)));
    }
    let mut dep_defs = vec![Predicate::new("p0", rng.below(3))];
    if rng.chance(1, 2) {
        dep_defs.push(Predicate::new("p1", rng.below(3)));
    }
    // odd items may negate, even items stay definite
    let negating = index % 2 == 1;

    let base_reads: Vec<Predicate> =
        imports.iter().chain(&base_defs).cloned().collect();
    let base_rules = (0..1 + rng.below(4))
        .map(|_| random_rule(&mut rng, &constants, &base_defs, &base_reads, &[]))
        .collect();
    let base = Module::new("base", base_defs.iter().cloned(), base_rules)
        .expect("generated heads stay inside defines");

    let dep_reads: Vec<Predicate> =
        imports.iter().chain(&base_defs).chain(&dep_defs).cloned().collect();
    // negating only downward keeps the union stratified
    let dep_negatable: Vec<Predicate> =
        imports.iter().chain(&base_defs).cloned().collect();
    let dep_rules = (0..1 + rng.below(5))
        .map(|_| {
            random_rule(
                &mut rng,
                &constants,
                &dep_defs,
                &dep_reads,
                if negating { &dep_negatable } else { &[] },
            )
        })
        .collect();
    let dependent = Module::new("dep", dep_defs.iter().cloned(), dep_rules)
        .expect("generated heads stay inside defines");

    // assumptions only about imports some rule actually reads
    let base_bodies = base.body_predicates();
    let dep_bodies = dependent.body_predicates();
    let mut assume_pos = Vec::new();
    let mut assume_neg = Vec::new();
    'imports: for pred in
        imports.iter().filter(|p| base_bodies.contains(p) || dep_bodies.contains(p))
    {
        for ga in ground_atoms_of(pred, &constants) {
            if assume_pos.len() + assume_neg.len() >= MAX_ASSUMES {
                break 'imports;
            }
            if rng.chance(1, 4) {
                assume_pos.push(ga);
            } else if negating && rng.chance(1, 8) {
                assume_neg.push(ga);
            }
        }
    }

    let goal_preds: Vec<Predicate> =
        base_defs.iter().chain(&dep_defs).cloned().collect();
    let mut goal = Vec::new();
    let mut goal_vars: Vec<String> = Vec::new();
    for _ in 0..1 + rng.below(2) {
        let pred = rng.pick(&goal_preds).clone();
        let args = (0..pred.arity)
            .map(|_| {
                if rng.chance(1, 2) {
                    let v = VAR_POOL[rng.below(VAR_POOL.len())].to_string();
                    if !goal_vars.contains(&v) {
                        goal_vars.push(v.clone());
                    }
                    Term::Var(v)
                } else {
                    Term::Const(rng.pick(&constants).clone())
                }
            })
            .collect();
        goal.push(Literal::pos(Atom::new(&pred.name, args)));
    }
    // a negative goal literal only where the rules already use negation,
    // so every item's goal runs under every semantics the item itself does
    let negated_rules = dependent.rules.iter().any(Rule::has_negation);
    if negated_rules && rng.chance(1, 2) {
        let pred = rng.pick(&goal_preds).clone();
        let args = bound_args(&mut rng, &constants, &goal_vars, pred.arity);
        goal.push(Literal::neg(Atom::new(&pred.name, args)));
    }

    CorpusItem { index, constants, base, dependent, assume_pos, assume_neg, goal }
}

/// Safe by construction: the positive body is drawn first, and head and
/// negative-literal arguments come only from its variables or constants.
fn random_rule(
    rng: &mut Rng,
    constants: &[String],
    heads: &[Predicate],
    reads: &[Predicate],
    negatable: &[Predicate],
) -> Rule {
    let mut body = Vec::new();
    let mut vars: Vec<String> = Vec::new();
    for _ in 0..rng.below(3) {
        let pred = rng.pick(reads).clone();
        let args = (0..pred.arity)
            .map(|_| {
                if rng.chance(1, 2) {
                    let v = VAR_POOL[rng.below(VAR_POOL.len())].to_string();
                    if !vars.contains(&v) {
                        vars.push(v.clone());
                    }
                    Term::Var(v)
                } else {
                    Term::Const(rng.pick(constants).clone())
                }
            })
            .collect();
        body.push(Literal::pos(Atom::new(&pred.name, args)));
    }
    if !negatable.is_empty() && rng.chance(1, 2) {
        let pred = rng.pick(negatable).clone();
        let args = bound_args(rng, constants, &vars, pred.arity);
        body.push(Literal::neg(Atom::new(&pred.name, args)));
    }
    let head_pred = rng.pick(heads).clone();
    let head = Atom::new(&head_pred.name, bound_args(rng, constants, &vars, head_pred.arity));
    Rule::new(head, body)
}

fn bound_args(rng: &mut Rng, constants: &[String], vars: &[String], arity: usize) -> Vec<Term> {
    (0..arity)
        .map(|_| {
            if !vars.is_empty() && rng.chance(1, 2) {
                Term::Var(rng.pick(vars).clone())
            } else {
                Term::Const(rng.pick(constants).clone())
            }
        })
        .collect()
}

fn ground_atoms_of(pred: &Predicate, constants: &[String]) -> Vec<GroundAtom> {
    let n = constants.len();
    (0..n.pow(pred.arity as u32))
        .map(|code| {
            let mut rest = code;
            let args = (0..pred.arity)
                .map(|_| {
                    let c = constants[rest % n].clone();
                    rest /= n;
                    c
                })
                .collect();
            GroundAtom { pred: pred.clone(), args }
        })
        .collect()
}

/// Modular and monolithic evaluation compared per semantics, plus the
/// knowledge-order dominance of the well-founded model over the Fitting
/// model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub index: usize,
    pub agreements: Vec<(SemanticsKind, bool)>,
    pub fitting_below_wf: bool,
}

impl EquivalenceReport {
    pub fn ok(&self) -> bool {
        self.fitting_below_wf && self.agreements.iter().all(|(_, a)| *a)
    }
}

pub fn check_equivalence(item: &CorpusItem) -> Result<EquivalenceReport> {
    let world = item.world()?;
    let start = item.start(&world)?;
    let plan = [0, 1];
    let mut agreements = Vec::new();
    for kind in item.kinds() {
        let c = compare(&world, &plan, &start, kind)?;
        agreements.push((kind, c.equal));
    }
    let union = world.union("union");
    let s = start.literal_set();
    let fit = fitting_lfp(&world.universe, &union, &s)?;
    let wfm = wf(&world.universe, &union, &s)?;
    Ok(EquivalenceReport { index: item.index, agreements, fitting_below_wf: fit.leq(&wfm) })
}

/// Replaces the base module by the residual of its own model and checks
/// the three-way agreement, per applicable semantics.
pub fn check_residuals(item: &CorpusItem) -> Result<Vec<(SemanticsKind, bool)>> {
    let world = item.world()?;
    let start = item.start(&world)?;
    item.kinds()
        .into_iter()
        .map(|kind| partial_eval_check(&world, 1, 0, &start, kind).map(|c| (kind, c.agree)))
        .collect()
}

/// Outcome of sampling ordered interpretation pairs against one step
/// operator. Pairs where the operator is undefined are skipped, not
/// counted as evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneSample {
    pub operator: &'static str,
    pub checked: usize,
    pub skipped: usize,
    pub violations: usize,
}

fn random_signed(rng: &mut Rng, atoms: u32) -> SignedSet {
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    for a in 0..atoms {
        match rng.below(3) {
            0 => drop(pos.insert(a)),
            1 => drop(neg.insert(a)),
            _ => {}
        }
    }
    SignedSet::from_parts(pos, neg).expect("disjoint by construction")
}

fn extend_signed(rng: &mut Rng, i: &SignedSet, atoms: u32) -> SignedSet {
    let mut j = i.clone();
    for a in 0..atoms {
        if !j.pos.contains(&a) && !j.neg.contains(&a) && rng.chance(1, 3) {
            if rng.chance(1, 2) {
                j.pos.insert(a);
            } else {
                j.neg.insert(a);
            }
        }
    }
    j
}

/// Draws up to `budget` ordered pairs per operator on the item's union
/// program and checks each step operator preserves the order.
pub fn sample_monotonicity(
    item: &CorpusItem,
    budget: usize,
    salt: u64,
) -> Result<Vec<MonotoneSample>> {
    let world = item.world()?;
    let union = world.union("union");
    let u = &world.universe;
    let atoms = u.len() as u32;
    let mut seeder = Rng::new(salt ^ item.index as u64);
    let mut rng = seeder.fork();
    let mut out = Vec::new();

    if !union.has_negation {
        let mut sample =
            MonotoneSample { operator: "tp", checked: 0, skipped: 0, violations: 0 };
        for _ in 0..budget {
            let i: BTreeSet<u32> = (0..atoms).filter(|_| rng.chance(1, 3)).collect();
            let mut j = i.clone();
            for a in 0..atoms {
                if !j.contains(&a) && rng.chance(1, 3) {
                    j.insert(a);
                }
            }
            let fi = tp_apply(u, &union, &i)?;
            let fj = tp_apply(u, &union, &j)?;
            sample.checked += 1;
            if !fi.is_subset(&fj) {
                sample.violations += 1;
            }
        }
        out.push(sample);
    }

    let mut fitting =
        MonotoneSample { operator: "fitting", checked: 0, skipped: 0, violations: 0 };
    let mut wp = MonotoneSample { operator: "wp", checked: 0, skipped: 0, violations: 0 };
    for _ in 0..budget {
        let i = random_signed(&mut rng, atoms);
        let j = extend_signed(&mut rng, &i, atoms);
        let fi = fitting_apply(u, &union, &i)?;
        let fj = fitting_apply(u, &union, &j)?;
        fitting.checked += 1;
        if !fi.leq(&fj) {
            fitting.violations += 1;
        }
        match (wp_apply(u, &union, &i), wp_apply(u, &union, &j)) {
            (Ok(wi), Ok(wj)) => {
                wp.checked += 1;
                if !wi.leq(&wj) {
                    wp.violations += 1;
                }
            }
            _ => wp.skipped += 1,
        }
    }
    out.push(fitting);
    out.push(wp);
    Ok(out)
}

/// One goal-wrapper check: over every ground substitution, the goal holds
/// in the program's model exactly when the wrapper's answer atom holds in
/// the model of the wrapped union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalReport {
    pub index: usize,
    pub kind: SemanticsKind,
    pub substitutions: usize,
    pub mismatches: Vec<String>,
}

impl GoalReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn check_goal(item: &CorpusItem, kind: SemanticsKind) -> Result<GoalReport> {
    let loaded = item.modules();
    let wrapped = wrap_goal(&item.goal, &loaded)?;
    let mut all = loaded;
    all.push(wrapped.clone());
    let world = GroundWorld::build(
        &all,
        &item.constants.iter().cloned().collect(),
        &BTreeSet::new(),
    )?;
    let u = &world.universe;
    let start = item.start(&world)?;
    let plain = ground_union("loaded", &[&world.modules[0], &world.modules[1]]);
    let full = world.union("wrapped");
    let plain_model = eval_module(u, &plain, &start, kind)?;
    let full_model = eval_module(u, &full, &start, kind)?;

    let vars: Vec<String> = wrapped.rules[0]
        .head
        .args
        .iter()
        .map(|t| match t {
            Term::Var(v) => v.clone(),
            Term::Const(_) => unreachable!("wrapper heads carry variables only"),
        })
        .collect();
    let consts = u.constants().to_vec();
    let total = consts.len().pow(vars.len() as u32);
    let mut mismatches = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let assignment: Vec<String> = (0..vars.len())
            .map(|_| {
                let c = consts[rest % consts.len()].clone();
                rest /= consts.len();
                c
            })
            .collect();
        let bind = |args: &[Term]| -> Vec<String> {
            args.iter()
                .map(|t| match t {
                    Term::Const(c) => c.clone(),
                    Term::Var(v) => {
                        let at = vars
                            .iter()
                            .position(|w| w == v)
                            .expect("goal variables appear in the wrapper head");
                        assignment[at].clone()
                    }
                })
                .collect()
        };
        let mut satisfied = true;
        for lit in &item.goal {
            let ga = GroundAtom { pred: lit.atom.predicate(), args: bind(&lit.atom.args) };
            let a = u.index_of(&ga)?;
            if plain_model.literal_truth(a, lit.positive) != Some(true) {
                satisfied = false;
                break;
            }
        }
        let answer = GroundAtom {
            pred: Predicate::new(ANSWER_PREDICATE, vars.len()),
            args: assignment.clone(),
        };
        let answered = full_model.literal_truth(u.index_of(&answer)?, true) == Some(true);
        if satisfied != answered {
            mismatches.push(format!(
                "({}): goal {} wrapper {}",
                assignment.join(","),
                satisfied,
                answered
            ));
        }
    }
    Ok(GoalReport { index: item.index, kind, substitutions: total, mismatches })
}

/// Aggregate outcome of the whole randomized suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub seed: u64,
    pub items: usize,
    pub definite_items: usize,
    pub equivalence_failures: Vec<usize>,
    pub residual_failures: Vec<usize>,
    pub dominance_failures: Vec<usize>,
    pub monotone_checked: usize,
    pub monotone_skipped: usize,
    pub monotone_violations: usize,
    pub goal_checks: usize,
    pub goal_failures: Vec<usize>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.equivalence_failures.is_empty()
            && self.residual_failures.is_empty()
            && self.dominance_failures.is_empty()
            && self.monotone_violations == 0
            && self.goal_failures.is_empty()
    }
}

/// Runs every check over a fresh corpus: equivalence and residuals on all
/// items, monotonicity sampling with the given per-operator budget, goal
/// wrapping on the first `goal_programs` items.
pub fn run_suite(
    seed: u64,
    count: usize,
    monotone_budget: usize,
    goal_programs: usize,
) -> Result<SuiteReport> {
    let items = generate(seed, count);
    let mut report = SuiteReport {
        seed,
        items: items.len(),
        definite_items: items.iter().filter(|i| !i.has_negation()).count(),
        equivalence_failures: Vec::new(),
        residual_failures: Vec::new(),
        dominance_failures: Vec::new(),
        monotone_checked: 0,
        monotone_skipped: 0,
        monotone_violations: 0,
        goal_checks: 0,
        goal_failures: Vec::new(),
    };
    for item in &items {
        let eq = check_equivalence(item)?;
        if !eq.agreements.iter().all(|(_, a)| *a) {
            report.equivalence_failures.push(item.index);
        }
        if !eq.fitting_below_wf {
            report.dominance_failures.push(item.index);
        }
        if check_residuals(item)?.iter().any(|(_, a)| !*a) {
            report.residual_failures.push(item.index);
        }
        for sample in sample_monotonicity(item, monotone_budget, seed)? {
            report.monotone_checked += sample.checked;
            report.monotone_skipped += sample.skipped;
            report.monotone_violations += sample.violations;
        }
    }
    for item in items.iter().take(goal_programs) {
        for kind in item.kinds() {
            report.goal_checks += 1;
            if !check_goal(item, kind)?.ok() {
                report.goal_failures.push(item.index);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::precedes;

    #[test]
    fn generation_is_deterministic() {
        let a = generate(7, 12);
        let b = generate(7, 12);
        assert_eq!(a, b);
        assert_ne!(generate(1, 8), generate(2, 8));
    }

    #[test]
    fn items_respect_the_size_budget() {
        for item in generate(3, 60) {
            let mut preds = item.base.predicates();
            preds.extend(item.dependent.predicates());
            assert!(preds.len() <= 6, "item {}", item.index);
            assert!(item.base.rules.len() + item.dependent.rules.len() <= 12);
            assert!(item.constants.len() <= 4);
            assert!(precedes(&item.dependent, &item.base));
            assert!(item.world().is_ok(), "item {} fails to ground", item.index);
            if item.index % 2 == 0 {
                assert!(!item.has_negation());
                assert!(item.assume_neg.is_empty());
            }
            assert!(!item.goal.is_empty());
        }
    }

    #[test]
    fn the_stream_exercises_every_feature() {
        let items = generate(5, 40);
        assert!(items.iter().any(|i| i.has_negation()));
        assert!(items.iter().any(|i| !i.assume_pos.is_empty()));
        assert!(items.iter().any(|i| !i.assume_neg.is_empty()));
        assert!(items.iter().any(|i| i.goal.len() == 2));
        assert!(items.iter().any(|i| i.goal.iter().any(|l| !l.positive)));
        assert!(items.iter().any(|i| {
            i.goal.iter().any(|l| l.atom.args.iter().any(|t| matches!(t, Term::Var(_))))
        }));
    }

    #[test]
    fn modular_matches_monolithic_across_the_stream() {
        for item in generate(11, 30) {
            let report = check_equivalence(&item).unwrap();
            assert!(report.ok(), "item {}: {report:?}", item.index);
        }
    }

    #[test]
    fn residual_replacement_preserves_models() {
        for item in generate(13, 20) {
            for (kind, agree) in check_residuals(&item).unwrap() {
                assert!(agree, "item {} under {kind}", item.index);
            }
        }
    }

    #[test]
    fn sampled_pairs_show_no_monotonicity_violation() {
        let mut checked = 0;
        for item in generate(17, 10) {
            for sample in sample_monotonicity(&item, 80, 17).unwrap() {
                assert_eq!(sample.violations, 0, "item {}", item.index);
                checked += sample.checked;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn wrapped_goals_agree_with_direct_satisfaction() {
        for item in generate(19, 10) {
            for kind in item.kinds() {
                let report = check_goal(&item, kind).unwrap();
                assert!(report.substitutions >= 1);
                assert!(report.ok(), "item {} under {kind}: {report:?}", item.index);
            }
        }
    }

    #[test]
    fn the_suite_runs_clean() {
        let report = run_suite(23, 25, 40, 5).unwrap();
        assert!(report.ok(), "{report:?}");
        assert!(report.definite_items >= 12);
        assert!(report.monotone_checked > 0);
        assert!(report.goal_checks >= 5);
    }
}
