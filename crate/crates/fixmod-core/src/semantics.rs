//! The three evaluation engines over ground modules: least model for
//! definite programs, the three-valued one-step semantics, and the
//! well-founded semantics built on unfounded sets. Each engine is a one-step
//! operator closed with `star`, so modular evaluation is closure nesting.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::logic::{
    ground, ground_precedes, Atom, AtomUniverse, GroundModule, GroundRule, Module, Predicate,
    Rule, Term,
};
use crate::ops::EndoFn;
use crate::order::{LiteralSets, SignedSet, SubsetLattice};
use crate::{Error, Result};

/// Which engine evaluates a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SemanticsKind {
    LeastModel,
    Fitting,
    WellFounded,
}

impl SemanticsKind {
    pub fn token(self) -> &'static str {
        match self {
            SemanticsKind::LeastModel => "lfp",
            SemanticsKind::Fitting => "fitting",
            SemanticsKind::WellFounded => "wf",
        }
    }

    pub const ALL: [SemanticsKind; 3] =
        [SemanticsKind::LeastModel, SemanticsKind::Fitting, SemanticsKind::WellFounded];
}

impl core::fmt::Display for SemanticsKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.token())
    }
}

/// What an evaluation returns: a plain atom set for the definite engine, a
/// consistent literal set for the partial ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Total(BTreeSet<u32>),
    Partial(SignedSet),
}

impl Model {
    /// True atoms of the model.
    pub fn true_atoms(&self) -> BTreeSet<u32> {
        match self {
            Model::Total(s) => s.clone(),
            Model::Partial(s) => s.pos.clone(),
        }
    }

    /// Three-valued truth of a ground literal: `Some(true)` when it holds,
    /// `Some(false)` when its complement does, `None` when undetermined.
    /// Total models determine everything.
    pub fn literal_truth(&self, atom: u32, positive: bool) -> Option<bool> {
        let atom_truth = match self {
            Model::Total(s) => Some(s.contains(&atom)),
            Model::Partial(s) => {
                if s.pos.contains(&atom) {
                    Some(true)
                } else if s.neg.contains(&atom) {
                    Some(false)
                } else {
                    None
                }
            }
        };
        atom_truth.map(|t| t == positive)
    }
}

/// Start element an evaluation grows from: what the caller already knows
/// about predicates no module defines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Start {
    Atoms(BTreeSet<u32>),
    Literals(SignedSet),
}

impl Start {
    pub fn empty() -> Self {
        Start::Atoms(BTreeSet::new())
    }

    /// Universe indices mentioned by the start.
    pub fn mentioned(&self) -> BTreeSet<u32> {
        match self {
            Start::Atoms(s) => s.clone(),
            Start::Literals(s) => s.atoms(),
        }
    }

    /// Atom-set form for the definite engine; negative literals have no
    /// reading there.
    pub fn atom_set(&self) -> Result<BTreeSet<u32>> {
        match self {
            Start::Atoms(s) => Ok(s.clone()),
            Start::Literals(s) if s.neg.is_empty() => Ok(s.pos.clone()),
            Start::Literals(_) => Err(Error::BadStart(
                "negative literals need the fitting or wf semantics".to_string(),
            )),
        }
    }

    /// Literal-set form for the partial engines.
    pub fn literal_set(&self) -> SignedSet {
        match self {
            Start::Atoms(s) => SignedSet { pos: s.clone(), neg: BTreeSet::new() },
            Start::Literals(s) => s.clone(),
        }
    }
}

fn render_rule(universe: &AtomUniverse, rule: &GroundRule) -> String {
    let mut out = universe.atom(rule.head).to_string();
    for (i, lit) in rule.body.iter().enumerate() {
        out.push_str(if i == 0 { " :- " } else { ", " });
        if !lit.positive {
            out.push_str("not ");
        }
        out.push_str(&universe.atom(lit.atom).to_string());
    }
    out.push('.');
    out
}

fn reject_negation(universe: &AtomUniverse, module: &GroundModule) -> Result<()> {
    if let Some(rule) = module.rules.iter().find(|r| r.body.iter().any(|l| !l.positive)) {
        return Err(Error::NegationInDefinite { rule: render_rule(universe, rule) });
    }
    Ok(())
}

/// One definite step: heads whose body atoms all lie in `i`. Rejects rules
/// with negative literals; those need [`fitting_apply`] or [`wp_apply`].
pub fn tp_apply(
    universe: &AtomUniverse,
    module: &GroundModule,
    i: &BTreeSet<u32>,
) -> Result<BTreeSet<u32>> {
    reject_negation(universe, module)?;
    Ok(module
        .rules
        .iter()
        .filter(|r| r.body.iter().all(|l| i.contains(&l.atom)))
        .map(|r| r.head)
        .collect())
}

/// Least model of a definite module extending `x`.
pub fn tp_lfp(
    universe: &AtomUniverse,
    module: &GroundModule,
    x: &BTreeSet<u32>,
) -> Result<BTreeSet<u32>> {
    let dom = SubsetLattice::new(universe.len());
    let f = EndoFn::new(&dom, |i: &BTreeSet<u32>| tp_apply(universe, module, i));
    f.star(x)
}

/// Positive one-step consequences under three-valued body reading: a body
/// literal holds only when `i` contains it.
fn t3_apply(module: &GroundModule, i: &SignedSet) -> BTreeSet<u32> {
    module
        .rules
        .iter()
        .filter(|r| {
            r.body.iter().all(|l| {
                if l.positive {
                    i.pos.contains(&l.atom)
                } else {
                    i.neg.contains(&l.atom)
                }
            })
        })
        .map(|r| r.head)
        .collect()
}

fn literal_false(i: &SignedSet, positive: bool, atom: u32) -> bool {
    if positive {
        i.neg.contains(&atom)
    } else {
        i.pos.contains(&atom)
    }
}

/// One three-valued step: derives a head when some rule body is wholly
/// true, and the complement of a defined atom when every rule for it has a
/// false conjunct (vacuously so for atoms without rules).
pub fn fitting_apply(
    universe: &AtomUniverse,
    module: &GroundModule,
    i: &SignedSet,
) -> Result<SignedSet> {
    let _ = universe;
    let pos = t3_apply(module, i);
    let neg = module
        .def_atoms
        .iter()
        .copied()
        .filter(|a| {
            module.rules_by_head.get(a).is_none_or(|rules| {
                rules.iter().all(|&r| {
                    module.rules[r]
                        .body
                        .iter()
                        .any(|l| literal_false(i, l.positive, l.atom))
                })
            })
        })
        .collect();
    SignedSet::from_parts(pos, neg)
}

/// Least fixedpoint of the three-valued step above `j` in the definedness
/// order. An inconsistent join along the way means `j` contradicts the
/// module's consequences.
pub fn fitting_lfp(
    universe: &AtomUniverse,
    module: &GroundModule,
    j: &SignedSet,
) -> Result<SignedSet> {
    let dom = LiteralSets::new(universe.len());
    let f = EndoFn::new(&dom, |i: &SignedSet| fitting_apply(universe, module, i));
    f.star(j)
}

/// Greatest set `U` of defined atoms such that every rule for a member has
/// a conjunct false under `i` or a positive conjunct inside `U`: nothing in
/// `U` can ever be derived. Computed as a downward closure from the full
/// defined slice.
pub fn greatest_unfounded(
    universe: &AtomUniverse,
    module: &GroundModule,
    i: &SignedSet,
) -> Result<BTreeSet<u32>> {
    let dom = SubsetLattice::new(universe.len());
    let block = EndoFn::from_fn(&dom, |u: &BTreeSet<u32>| {
        module
            .def_atoms
            .iter()
            .copied()
            .filter(|a| {
                module.rules_by_head.get(a).is_none_or(|rules| {
                    rules.iter().all(|&r| {
                        module.rules[r].body.iter().any(|l| {
                            literal_false(i, l.positive, l.atom)
                                || (l.positive && u.contains(&l.atom))
                        })
                    })
                })
            })
            .collect()
    });
    block.down_closure(&module.def_atoms.iter().copied().collect())
}

/// One well-founded step: positive consequences joined with the complement
/// of the greatest unfounded set. The two sides can contradict each other
/// on starts no well-founded iteration reaches; that is reported as an
/// error rather than absorbed.
pub fn wp_apply(
    universe: &AtomUniverse,
    module: &GroundModule,
    i: &SignedSet,
) -> Result<SignedSet> {
    let pos = t3_apply(module, i);
    let neg = greatest_unfounded(universe, module, i)?;
    if let Some(&a) = pos.intersection(&neg).next() {
        return Err(Error::InconsistentResult(format!(
            "{} derived and unfounded at once",
            universe.atom(a)
        )));
    }
    SignedSet::from_parts(pos, neg)
}

fn check_start_outside(
    universe: &AtomUniverse,
    defines: &BTreeSet<Predicate>,
    mentioned: &BTreeSet<u32>,
) -> Result<()> {
    for &a in mentioned {
        let pred = &universe.atom(a).pred;
        if defines.contains(pred) {
            return Err(Error::StartInsideDefines { predicate: pred.to_string() });
        }
    }
    Ok(())
}

/// Well-founded partial model of the module extending `j`; `j` may only
/// speak about predicates the module does not define.
pub fn wf(universe: &AtomUniverse, module: &GroundModule, j: &SignedSet) -> Result<SignedSet> {
    check_start_outside(universe, &module.defines, &j.atoms())?;
    wf_unchecked(universe, module, j)
}

fn wf_unchecked(
    universe: &AtomUniverse,
    module: &GroundModule,
    j: &SignedSet,
) -> Result<SignedSet> {
    let dom = LiteralSets::new(universe.len());
    let f = EndoFn::new(&dom, |i: &SignedSet| wp_apply(universe, module, i));
    f.star(j)
}

/// Modules of one run grounded over their shared universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundWorld {
    pub universe: AtomUniverse,
    pub modules: Vec<GroundModule>,
}

impl GroundWorld {
    pub fn build(
        modules: &[Module],
        extra_constants: &BTreeSet<String>,
        extra_predicates: &BTreeSet<Predicate>,
    ) -> Result<Self> {
        let universe = AtomUniverse::build(modules, extra_constants, extra_predicates)?;
        let grounded = modules
            .iter()
            .map(|m| ground(&universe, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroundWorld { universe, modules: grounded })
    }

    /// Ground union of all modules, for monolithic evaluation.
    pub fn union(&self, name: &str) -> GroundModule {
        ground_union(name, &self.modules.iter().collect::<Vec<_>>())
    }
}

/// Merges ground modules: union of rules, defines and defined slices.
pub fn ground_union(name: &str, modules: &[&GroundModule]) -> GroundModule {
    let mut rules: Vec<GroundRule> = modules
        .iter()
        .flat_map(|m| m.rules.iter().cloned())
        .collect();
    rules.sort();
    rules.dedup();
    let mut rules_by_head = alloc::collections::BTreeMap::new();
    for (i, r) in rules.iter().enumerate() {
        rules_by_head.entry(r.head).or_insert_with(Vec::new).push(i);
    }
    let has_negation = rules.iter().any(|r| r.body.iter().any(|l| !l.positive));
    GroundModule {
        name: name.to_string(),
        defines: modules.iter().flat_map(|m| m.defines.iter().cloned()).collect(),
        def_atoms: modules.iter().flat_map(|m| m.def_atoms.iter().copied()).collect(),
        rules,
        rules_by_head,
        has_negation,
    }
}

/// Closure of a single module from a start, under the given engine.
pub fn eval_module(
    universe: &AtomUniverse,
    module: &GroundModule,
    start: &Start,
    kind: SemanticsKind,
) -> Result<Model> {
    check_start_outside(universe, &module.defines, &start.mentioned())?;
    eval_module_unchecked(universe, module, start, kind)
}

fn eval_module_unchecked(
    universe: &AtomUniverse,
    module: &GroundModule,
    start: &Start,
    kind: SemanticsKind,
) -> Result<Model> {
    match kind {
        SemanticsKind::LeastModel => {
            Ok(Model::Total(tp_lfp(universe, module, &start.atom_set()?)?))
        }
        SemanticsKind::Fitting => {
            Ok(Model::Partial(fitting_lfp(universe, module, &start.literal_set())?))
        }
        SemanticsKind::WellFounded => {
            Ok(Model::Partial(wf_unchecked(universe, module, &start.literal_set())?))
        }
    }
}

fn validate_plan(world: &GroundWorld, plan: &[usize]) -> Result<()> {
    let n = world.modules.len();
    let mut seen = alloc::vec![false; n];
    for &i in plan {
        if i >= n {
            return Err(Error::BadPlan(format!("index {i} out of range")));
        }
        if seen[i] {
            return Err(Error::BadPlan(format!(
                "module {} appears twice",
                world.modules[i].name
            )));
        }
        seen[i] = true;
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::BadPlan(format!(
            "module {} missing from plan",
            world.modules[missing].name
        )));
    }
    // earlier modules must not read later definitions
    for (pos, &early) in plan.iter().enumerate() {
        for &late in &plan[pos + 1..] {
            if !ground_precedes(&world.universe, &world.modules[late], &world.modules[early]) {
                return Err(Error::BadPlan(format!(
                    "{} is evaluated before {} but reads its definitions",
                    world.modules[early].name, world.modules[late].name
                )));
            }
        }
    }
    Ok(())
}

fn all_defines(world: &GroundWorld) -> BTreeSet<Predicate> {
    world.modules.iter().flat_map(|m| m.defines.iter().cloned()).collect()
}

/// Folds per-module closures in plan order; the start may only mention
/// predicates outside every module's defines.
pub fn modular_eval(
    world: &GroundWorld,
    plan: &[usize],
    start: &Start,
    kind: SemanticsKind,
) -> Result<Model> {
    validate_plan(world, plan)?;
    check_start_outside(&world.universe, &all_defines(world), &start.mentioned())?;
    match kind {
        SemanticsKind::LeastModel => {
            let mut x = start.atom_set()?;
            for &i in plan {
                x = tp_lfp(&world.universe, &world.modules[i], &x)?;
            }
            Ok(Model::Total(x))
        }
        SemanticsKind::Fitting => {
            let mut s = start.literal_set();
            for &i in plan {
                s = fitting_lfp(&world.universe, &world.modules[i], &s)?;
            }
            Ok(Model::Partial(s))
        }
        SemanticsKind::WellFounded => {
            let mut s = start.literal_set();
            for &i in plan {
                // disjoint defines make the running value a legal start for
                // every later module; anything else is a planning bug
                s = wf(&world.universe, &world.modules[i], &s)?;
            }
            Ok(Model::Partial(s))
        }
    }
}

/// Evaluates the union of all modules as one program.
pub fn monolithic_eval(
    world: &GroundWorld,
    start: &Start,
    kind: SemanticsKind,
) -> Result<Model> {
    let union = world.union("union");
    eval_module(&world.universe, &union, start, kind)
}

/// Modular and monolithic results side by side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub modular: Model,
    pub monolithic: Model,
    pub equal: bool,
}

pub fn compare(
    world: &GroundWorld,
    plan: &[usize],
    start: &Start,
    kind: SemanticsKind,
) -> Result<Comparison> {
    let modular = modular_eval(world, plan, start, kind)?;
    let monolithic = monolithic_eval(world, start, kind)?;
    let equal = modular == monolithic;
    Ok(Comparison { modular, monolithic, equal })
}

/// How the one-step closures of a layered pair `p` over `q` relate at one
/// interpretation: the joint step is bounded by the nested steps from
/// below, dominates the pointwise sum, and commutes into the sum when the
/// dependent side goes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WIneqReport {
    pub joint: SignedSet,
    pub nested: SignedSet,
    pub sum: SignedSet,
    pub swapped: SignedSet,
    /// `W⁺ of the union ≤ W⁺_p ∘ W⁺_q` at `i`.
    pub joint_below_nested: bool,
    /// `W⁺_p(i) ⊔ W⁺_q(i) ≤ W⁺ of the union` at `i`.
    pub sum_below_joint: bool,
    /// `W⁺_q ∘ W⁺_p = W⁺_q + W⁺_p` at `i`.
    pub swapped_equals_sum: bool,
}

impl WIneqReport {
    pub fn all_hold(&self) -> bool {
        self.joint_below_nested && self.sum_below_joint && self.swapped_equals_sum
    }
}

fn wp_inflate(
    universe: &AtomUniverse,
    module: &GroundModule,
    i: &SignedSet,
) -> Result<SignedSet> {
    i.union(&wp_apply(universe, module, i)?)
}

/// Evaluates the three step relations at `i`; requires `p` layered over `q`.
pub fn check_w_inequalities(
    universe: &AtomUniverse,
    p: &GroundModule,
    q: &GroundModule,
    i: &SignedSet,
) -> Result<WIneqReport> {
    if !ground_precedes(universe, p, q) {
        return Err(Error::NotPreceding { dependent: p.name.clone(), base: q.name.clone() });
    }
    let union = ground_union("union", &[p, q]);
    let joint = wp_inflate(universe, &union, i)?;
    let via_q = wp_inflate(universe, q, i)?;
    let nested = wp_inflate(universe, p, &via_q)?;
    let via_p = wp_inflate(universe, p, i)?;
    let sum = via_p.union(&via_q)?;
    let swapped = wp_inflate(universe, q, &via_p)?;
    Ok(WIneqReport {
        joint_below_nested: joint.leq(&nested),
        sum_below_joint: sum.leq(&joint),
        swapped_equals_sum: swapped == sum,
        joint,
        nested,
        sum,
        swapped,
    })
}

/// Replays a model as a program over the given universe slice: facts pin
/// what is true, and for the partial engines looping rules keep an atom
/// exactly as undetermined or refuted as the model had it.
pub fn residualize(
    universe: &AtomUniverse,
    slice: &BTreeSet<u32>,
    model: &Model,
    kind: SemanticsKind,
    name: &str,
) -> Result<Module> {
    let defines: BTreeSet<Predicate> =
        slice.iter().map(|&a| universe.atom(a).pred.clone()).collect();
    let mut rules = Vec::new();
    for &a in slice {
        let ga = universe.atom(a);
        let atom = Atom::new(
            &ga.pred.name,
            ga.args.iter().map(|c| Term::Const(c.clone())).collect(),
        );
        let truth = model.literal_truth(a, true);
        match kind {
            SemanticsKind::LeastModel => {
                let total = matches!(model, Model::Total(_));
                if !total {
                    return Err(Error::InconsistentResult(
                        "least-model residual needs a total model".to_string(),
                    ));
                }
                if truth == Some(true) {
                    rules.push(Rule::fact(atom));
                }
            }
            SemanticsKind::Fitting => match truth {
                Some(true) => rules.push(Rule::fact(atom)),
                Some(false) => {}
                None => rules.push(Rule::new(atom.clone(), alloc::vec![
                    crate::logic::Literal::pos(atom)
                ])),
            },
            SemanticsKind::WellFounded => match truth {
                Some(true) => rules.push(Rule::fact(atom)),
                Some(false) => rules.push(Rule::new(atom.clone(), alloc::vec![
                    crate::logic::Literal::pos(atom)
                ])),
                None => rules.push(Rule::new(atom.clone(), alloc::vec![
                    crate::logic::Literal::neg(atom)
                ])),
            },
        }
    }
    Module::new(name, defines, rules)
}

/// Outcome of replacing a base module by the residual of its model: the
/// evaluation of the layered module over the residual, from the original
/// start and from nothing, against the original union evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualCheck {
    pub residual: Module,
    pub original: Model,
    pub with_residual: Model,
    pub from_bottom: Model,
    pub agree: bool,
    /// Whether the dependent module still layers over the residual.
    pub residual_preceded: bool,
}

/// For `p` layered over `q`: evaluates the union, residualizes `q`'s own
/// model into a fact-and-loop program, and re-evaluates the union with the
/// residual in `q`'s place, both from `start` and from the empty start.
pub fn partial_eval_check(
    world: &GroundWorld,
    p_idx: usize,
    q_idx: usize,
    start: &Start,
    kind: SemanticsKind,
) -> Result<ResidualCheck> {
    let p = &world.modules[p_idx];
    let q = &world.modules[q_idx];
    if !ground_precedes(&world.universe, p, q) {
        return Err(Error::NotPreceding { dependent: p.name.clone(), base: q.name.clone() });
    }
    let both: BTreeSet<Predicate> =
        p.defines.union(&q.defines).cloned().collect();
    check_start_outside(&world.universe, &both, &start.mentioned())?;

    let union = ground_union("union", &[p, q]);
    let original = eval_module_unchecked(&world.universe, &union, start, kind)?;

    let q_model = eval_module_unchecked(&world.universe, q, start, kind)?;
    // the residual must also carry the start's predicates: its model
    // contains them, and the from-bottom run has no other way to see them
    let mut slice_preds: BTreeSet<Predicate> = q.defines.clone();
    slice_preds.extend(
        start
            .mentioned()
            .iter()
            .map(|&a| world.universe.atom(a).pred.clone()),
    );
    let slice = world.universe.atoms_of(&slice_preds);
    let residual = residualize(
        &world.universe,
        &slice,
        &q_model,
        kind,
        &format!("{}x", q.name),
    )?;
    let gres = ground(&world.universe, &residual)?;
    let with_union = ground_union("union", &[p, &gres]);
    // start predicates are defined by the residual now, so the start check
    // does not apply to this term
    let with_residual =
        eval_module_unchecked(&world.universe, &with_union, start, kind)?;
    let from_bottom =
        eval_module_unchecked(&world.universe, &with_union, &Start::empty(), kind)?;
    let agree = original == with_residual && original == from_bottom;
    let residual_preceded = ground_precedes(&world.universe, p, &gres);
    Ok(ResidualCheck {
        residual,
        original,
        with_residual,
        from_bottom,
        agree,
        residual_preceded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Literal;
    use alloc::vec;

    fn atom0(p: &str) -> Atom {
        Atom::new(p, vec![])
    }

    /// P = {p ← p; p ← q} defining p, Q = {q ← q} defining q.
    fn layered_world() -> GroundWorld {
        let p = Module::new(
            "p",
            [Predicate::new("p", 0)],
            vec![
                Rule::new(atom0("p"), vec![Literal::pos(atom0("p"))]),
                Rule::new(atom0("p"), vec![Literal::pos(atom0("q"))]),
            ],
        )
        .unwrap();
        let q = Module::new(
            "q",
            [Predicate::new("q", 0)],
            vec![Rule::new(atom0("q"), vec![Literal::pos(atom0("q"))])],
        )
        .unwrap();
        GroundWorld::build(&[p, q], &BTreeSet::new(), &BTreeSet::new()).unwrap()
    }

    fn signed(universe: &AtomUniverse, pos: &[&str], neg: &[&str]) -> SignedSet {
        SignedSet::from_parts(
            pos.iter().map(|s| universe.find(s).unwrap()).collect(),
            neg.iter().map(|s| universe.find(s).unwrap()).collect(),
        )
        .unwrap()
    }

    fn atoms(universe: &AtomUniverse, names: &[&str]) -> BTreeSet<u32> {
        names.iter().map(|s| universe.find(s).unwrap()).collect()
    }

    fn edges_and_paths() -> GroundWorld {
        let c = |s: &str| Term::Const(s.to_string());
        let v = |s: &str| Term::Var(s.to_string());
        let edges = Module::new(
            "edges",
            [Predicate::new("e", 2)],
            vec![
                Rule::fact(Atom::new("e", vec![c("1"), c("2")])),
                Rule::fact(Atom::new("e", vec![c("2"), c("3")])),
            ],
        )
        .unwrap();
        let paths = Module::new(
            "paths",
            [Predicate::new("path", 2)],
            vec![
                Rule::new(
                    Atom::new("path", vec![v("X"), v("Y")]),
                    vec![Literal::pos(Atom::new("e", vec![v("X"), v("Y")]))],
                ),
                Rule::new(
                    Atom::new("path", vec![v("X"), v("Y")]),
                    vec![
                        Literal::pos(Atom::new("e", vec![v("X"), v("Z")])),
                        Literal::pos(Atom::new("path", vec![v("Z"), v("Y")])),
                    ],
                ),
            ],
        )
        .unwrap();
        GroundWorld::build(&[paths, edges], &BTreeSet::new(), &BTreeSet::new()).unwrap()
    }

    #[test]
    fn tp_single_steps() {
        let m = Module::new(
            "m",
            [Predicate::new("p", 0)],
            vec![Rule::new(atom0("p"), vec![Literal::pos(atom0("q"))])],
        )
        .unwrap();
        let w = GroundWorld::build(&[m], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let u = &w.universe;
        assert_eq!(
            tp_apply(u, &w.modules[0], &atoms(u, &["q"])).unwrap(),
            atoms(u, &["p"])
        );
        assert_eq!(tp_apply(u, &w.modules[0], &BTreeSet::new()).unwrap(), BTreeSet::new());

        let facts = Module::new("f", [Predicate::new("q", 0)], vec![Rule::fact(atom0("q"))])
            .unwrap();
        let wf_ = GroundWorld::build(&[facts], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let all: BTreeSet<u32> = (0..wf_.universe.len() as u32).collect();
        assert_eq!(
            tp_apply(&wf_.universe, &wf_.modules[0], &all).unwrap(),
            atoms(&wf_.universe, &["q"])
        );
    }

    #[test]
    fn tp_rejects_negation() {
        let m = Module::new(
            "m",
            [Predicate::new("p", 0)],
            vec![Rule::new(atom0("p"), vec![Literal::neg(atom0("q"))])],
        )
        .unwrap();
        let w = GroundWorld::build(&[m], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert_eq!(
            tp_apply(&w.universe, &w.modules[0], &BTreeSet::new()),
            Err(Error::NegationInDefinite { rule: "p :- not q.".into() })
        );
    }

    #[test]
    fn tp_lfp_derives_all_paths() {
        let w = edges_and_paths();
        let union = w.union("all");
        let model = tp_lfp(&w.universe, &union, &BTreeSet::new()).unwrap();
        assert_eq!(model.len(), 5);
        assert!(model.contains(&w.universe.find("path(1,3)").unwrap()));
        // closure is idempotent
        assert_eq!(tp_lfp(&w.universe, &union, &model).unwrap(), model);

        let empty = Module::new("n", [], vec![]).unwrap();
        let we = GroundWorld::build(&[empty], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert_eq!(
            tp_lfp(&we.universe, &we.modules[0], &BTreeSet::new()).unwrap(),
            BTreeSet::new()
        );
    }

    #[test]
    fn fitting_steps() {
        let w = layered_world();
        let u = &w.universe;
        let q = &w.modules[1];
        // a looping rule leaves its head undetermined, not false
        assert_eq!(fitting_apply(u, q, &SignedSet::new()).unwrap(), SignedSet::new());

        let m = Module::new("m", [Predicate::new("r", 0)], vec![]).unwrap();
        let wr = GroundWorld::build(
            &[m],
            &BTreeSet::new(),
            &[Predicate::new("r", 0)].into(),
        )
        .unwrap();
        assert_eq!(
            fitting_apply(&wr.universe, &wr.modules[0], &SignedSet::new()).unwrap(),
            signed(&wr.universe, &[], &["r"])
        );

        let pn = Module::new(
            "pn",
            [Predicate::new("p", 0)],
            vec![Rule::new(atom0("p"), vec![Literal::neg(atom0("q"))])],
        )
        .unwrap();
        let wn = GroundWorld::build(&[pn], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert_eq!(
            fitting_apply(&wn.universe, &wn.modules[0], &signed(&wn.universe, &["q"], &[]))
                .unwrap(),
            signed(&wn.universe, &[], &["p"])
        );
    }

    #[test]
    fn fitting_closures() {
        let w = layered_world();
        assert_eq!(
            fitting_lfp(&w.universe, &w.modules[1], &SignedSet::new()).unwrap(),
            SignedSet::new()
        );

        let facts = Module::new("f", [Predicate::new("q", 0)], vec![Rule::fact(atom0("q"))])
            .unwrap();
        let wq = GroundWorld::build(&[facts], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert_eq!(
            fitting_lfp(&wq.universe, &wq.modules[0], &SignedSet::new()).unwrap(),
            signed(&wq.universe, &["q"], &[])
        );

        let both = Module::new(
            "b",
            [Predicate::new("q", 0), Predicate::new("p", 0)],
            vec![
                Rule::fact(atom0("q")),
                Rule::new(atom0("p"), vec![Literal::neg(atom0("q"))]),
            ],
        )
        .unwrap();
        let wb = GroundWorld::build(&[both], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert_eq!(
            fitting_lfp(&wb.universe, &wb.modules[0], &SignedSet::new()).unwrap(),
            signed(&wb.universe, &["q"], &["p"])
        );

        // a start contradicting the rules is reported, not absorbed
        let err = fitting_lfp(
            &wq.universe,
            &wq.modules[0],
            &signed(&wq.universe, &[], &["q"]),
        );
        assert!(matches!(err, Err(Error::InconsistentJoin(_))));
    }

    #[test]
    fn unfounded_sets_from_the_worked_example() {
        let w = layered_world();
        let u = &w.universe;
        let p = &w.modules[0];
        let union = w.union("pq");
        assert_eq!(
            greatest_unfounded(u, &union, &SignedSet::new()).unwrap(),
            atoms(u, &["p", "q"])
        );
        assert_eq!(greatest_unfounded(u, p, &SignedSet::new()).unwrap(), BTreeSet::new());
        assert_eq!(
            greatest_unfounded(u, p, &signed(u, &[], &["q"])).unwrap(),
            atoms(u, &["p"])
        );
    }

    #[test]
    fn wp_steps_from_the_worked_example() {
        let w = layered_world();
        let u = &w.universe;
        assert_eq!(
            wp_apply(u, &w.modules[0], &SignedSet::new()).unwrap(),
            SignedSet::new()
        );
        assert_eq!(
            wp_apply(u, &w.modules[1], &SignedSet::new()).unwrap(),
            signed(u, &[], &["q"])
        );
        assert_eq!(
            wp_apply(u, &w.union("pq"), &SignedSet::new()).unwrap(),
            signed(u, &[], &["p", "q"])
        );
    }

    #[test]
    fn wp_can_contradict_itself_off_the_iteration_path() {
        let loopy = Module::new(
            "l",
            [Predicate::new("p", 0)],
            vec![Rule::new(atom0("p"), vec![Literal::pos(atom0("p"))])],
        )
        .unwrap();
        let w = GroundWorld::build(&[loopy], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let i = signed(&w.universe, &["p"], &[]);
        assert!(matches!(
            wp_apply(&w.universe, &w.modules[0], &i),
            Err(Error::InconsistentResult(_))
        ));
    }

    #[test]
    fn wf_closures_from_the_worked_example() {
        let w = layered_world();
        let u = &w.universe;
        assert_eq!(
            wf(u, &w.modules[1], &SignedSet::new()).unwrap(),
            signed(u, &[], &["q"])
        );
        assert_eq!(
            wf(u, &w.modules[0], &signed(u, &[], &["q"])).unwrap(),
            signed(u, &[], &["p", "q"])
        );
        assert_eq!(
            wf(u, &w.union("pq"), &SignedSet::new()).unwrap(),
            signed(u, &[], &["p", "q"])
        );
    }

    #[test]
    fn wf_start_must_stay_outside_defines() {
        let w = layered_world();
        let u = &w.universe;
        assert_eq!(
            wf(u, &w.modules[1], &signed(u, &[], &["q"])),
            Err(Error::StartInsideDefines { predicate: "q/0".into() })
        );
    }

    #[test]
    fn operators_stay_inside_the_defined_slice() {
        let w = layered_world();
        let u = &w.universe;
        let p = &w.modules[0];
        // enumerate all consistent signed sets over the two atoms
        for code in 0..9u32 {
            let mut pos = BTreeSet::new();
            let mut neg = BTreeSet::new();
            for (a, st) in [(0u32, code % 3), (1u32, code / 3)] {
                match st {
                    1 => drop(pos.insert(a)),
                    2 => drop(neg.insert(a)),
                    _ => {}
                }
            }
            let i = SignedSet::from_parts(pos, neg).unwrap();
            if let Ok(out) = wp_apply(u, p, &i) {
                assert!(out.atoms().is_subset(&p.def_atoms));
            }
            let out = fitting_apply(u, p, &i).unwrap();
            assert!(out.atoms().is_subset(&p.def_atoms));
        }
    }

    /// All consistent signed sets over the atoms `0..n`.
    fn all_signed(n: u32) -> Vec<SignedSet> {
        let mut out = vec![SignedSet::new()];
        for a in 0..n {
            let mut next = Vec::new();
            for s in &out {
                next.push(s.clone());
                let mut pos = s.clone();
                pos.pos.insert(a);
                next.push(pos);
                let mut neg = s.clone();
                neg.neg.insert(a);
                next.push(neg);
            }
            out = next;
        }
        out
    }

    #[test]
    fn step_operators_are_monotone_where_defined() {
        let w = layered_world();
        let u = &w.universe;
        let states = all_signed(u.len() as u32);
        for m in [&w.modules[0], &w.modules[1], &w.union("pq")] {
            for i in &states {
                for j in &states {
                    if !i.leq(j) {
                        continue;
                    }
                    let fi = fitting_apply(u, m, i).unwrap();
                    let fj = fitting_apply(u, m, j).unwrap();
                    assert!(fi.leq(&fj));
                    if let (Ok(wi), Ok(wj)) = (wp_apply(u, m, i), wp_apply(u, m, j)) {
                        assert!(wi.leq(&wj));
                    }
                }
            }
        }
    }

    #[test]
    fn unfounded_grows_under_outside_knowledge() {
        let w = layered_world();
        let u = &w.universe;
        let p = &w.modules[0];
        let q_atom = u.find("q").unwrap();
        let states = all_signed(u.len() as u32);
        for i in &states {
            for j in &states {
                // j adds only literals about the imported predicate
                if !i.leq(j) {
                    continue;
                }
                let added_pos: BTreeSet<u32> = j.pos.difference(&i.pos).copied().collect();
                let added_neg: BTreeSet<u32> = j.neg.difference(&i.neg).copied().collect();
                if !added_pos.iter().chain(&added_neg).all(|&a| a == q_atom) {
                    continue;
                }
                let ui = greatest_unfounded(u, p, i).unwrap();
                let uj = greatest_unfounded(u, p, j).unwrap();
                assert!(ui.is_subset(&uj), "{i:?} vs {j:?}");
            }
        }
    }

    #[test]
    fn modular_equals_monolithic_on_the_worked_example() {
        let w = layered_world();
        // plan: q first, then p
        for kind in SemanticsKind::ALL {
            if kind == SemanticsKind::LeastModel {
                continue; // p ← p over q needs no negation, lfp applies too
            }
            let c = compare(&w, &[1, 0], &Start::empty(), kind).unwrap();
            assert!(c.equal, "{kind}");
        }
        let c = compare(&w, &[1, 0], &Start::empty(), SemanticsKind::LeastModel).unwrap();
        assert!(c.equal);
        assert_eq!(c.monolithic, Model::Total(BTreeSet::new()));

        let wp = edges_and_paths();
        let plan = vec![1, 0]; // edges first
        let c = compare(&wp, &plan, &Start::empty(), SemanticsKind::LeastModel).unwrap();
        assert!(c.equal);
        assert_eq!(c.modular.true_atoms().len(), 5);
    }

    #[test]
    fn bad_plans_are_rejected() {
        let w = layered_world();
        assert!(matches!(
            modular_eval(&w, &[0, 0], &Start::empty(), SemanticsKind::WellFounded),
            Err(Error::BadPlan(_))
        ));
        assert!(matches!(
            modular_eval(&w, &[0], &Start::empty(), SemanticsKind::WellFounded),
            Err(Error::BadPlan(_))
        ));
        // p before q reads q's definitions
        assert!(matches!(
            modular_eval(&w, &[0, 1], &Start::empty(), SemanticsKind::WellFounded),
            Err(Error::BadPlan(_))
        ));
    }

    #[test]
    fn start_literals_feed_the_evaluation() {
        let c = |s: &str| Term::Const(s.to_string());
        let m = Module::new(
            "m",
            [Predicate::new("p", 0)],
            vec![Rule::new(atom0("p"), vec![Literal::pos(Atom::new("e", vec![c("1")]))])],
        )
        .unwrap();
        let w = GroundWorld::build(&[m], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let u = &w.universe;
        let start = Start::Atoms(atoms(u, &["e(1)"]));
        let model = modular_eval(&w, &[0], &start, SemanticsKind::LeastModel).unwrap();
        assert_eq!(model.true_atoms(), atoms(u, &["e(1)", "p"]));

        // starts naming defined predicates are rejected
        let bad = Start::Atoms(atoms(u, &["p"]));
        assert_eq!(
            modular_eval(&w, &[0], &bad, SemanticsKind::LeastModel),
            Err(Error::StartInsideDefines { predicate: "p/0".into() })
        );

        // negative start literals have no least-model reading
        let neg = Start::Literals(signed(u, &[], &["e(1)"]));
        assert!(matches!(
            modular_eval(&w, &[0], &neg, SemanticsKind::LeastModel),
            Err(Error::BadStart(_))
        ));
    }

    #[test]
    fn w_inequalities_on_the_worked_example() {
        let w = layered_world();
        let u = &w.universe;
        let report =
            check_w_inequalities(u, &w.modules[0], &w.modules[1], &SignedSet::new()).unwrap();
        assert!(report.all_hold());
        assert_eq!(report.joint, signed(u, &[], &["p", "q"]));
        assert_eq!(report.nested, signed(u, &[], &["p", "q"]));
        // the pointwise sum is strictly below the joint step here
        assert_eq!(report.sum, signed(u, &[], &["q"]));
        assert_ne!(report.sum, report.joint);
        assert_eq!(report.swapped, report.sum);

        assert!(matches!(
            check_w_inequalities(u, &w.modules[1], &w.modules[0], &SignedSet::new()),
            Err(Error::NotPreceding { .. })
        ));
    }

    #[test]
    fn w_inequalities_with_a_facts_base() {
        let p = Module::new(
            "p",
            [Predicate::new("p", 0)],
            vec![Rule::new(atom0("p"), vec![Literal::pos(atom0("q"))])],
        )
        .unwrap();
        let q = Module::new("q", [Predicate::new("q", 0)], vec![Rule::fact(atom0("q"))])
            .unwrap();
        let w = GroundWorld::build(&[p, q], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let report = check_w_inequalities(
            &w.universe,
            &w.modules[0],
            &w.modules[1],
            &SignedSet::new(),
        )
        .unwrap();
        assert!(report.all_hold());
        assert_eq!(report.sum, report.joint);
    }

    #[test]
    fn residuals_replay_models() {
        let w = layered_world();
        let u = &w.universe;
        // a false atom loops under wf
        let model = Model::Partial(signed(u, &[], &["q"]));
        let slice = atoms(u, &["q"]);
        let m = residualize(u, &slice, &model, SemanticsKind::WellFounded, "qx").unwrap();
        assert_eq!(m.rules.len(), 1);
        assert_eq!(m.rules[0].to_string(), "q :- q.");

        // true stays a fact, undetermined loops positively
        let model = Model::Partial(signed(u, &["q"], &[]));
        let slice = atoms(u, &["p", "q"]);
        let m = residualize(u, &slice, &model, SemanticsKind::Fitting, "r").unwrap();
        let rendered: Vec<String> = m.rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(rendered, vec!["p :- p.".to_string(), "q.".to_string()]);

        let model = Model::Total(atoms(u, &["q"]));
        let m = residualize(u, &slice, &model, SemanticsKind::LeastModel, "r").unwrap();
        let rendered: Vec<String> = m.rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(rendered, vec!["q.".to_string()]);
    }

    #[test]
    fn partial_eval_on_the_worked_example() {
        let w = layered_world();
        let check =
            partial_eval_check(&w, 0, 1, &Start::empty(), SemanticsKind::WellFounded).unwrap();
        assert!(check.agree);
        assert!(check.residual_preceded);
        assert_eq!(check.residual.rules.len(), 1);
        assert_eq!(check.residual.rules[0].to_string(), "q :- q.");
        assert_eq!(
            check.original,
            Model::Partial(signed(&w.universe, &[], &["p", "q"]))
        );
    }

    #[test]
    fn partial_eval_under_least_model() {
        let w = edges_and_paths();
        // paths is module 0, edges module 1
        let check =
            partial_eval_check(&w, 0, 1, &Start::empty(), SemanticsKind::LeastModel).unwrap();
        assert!(check.agree);
        assert!(check.residual_preceded);
        // the residual is pure facts
        assert!(check.residual.rules.iter().all(|r| r.body.is_empty()));
        assert_eq!(check.residual.rules.len(), 2);
    }

    #[test]
    fn partial_eval_under_fitting_with_facts() {
        let p = Module::new(
            "p",
            [Predicate::new("p", 0)],
            vec![Rule::new(atom0("p"), vec![Literal::pos(atom0("q"))])],
        )
        .unwrap();
        let q = Module::new("q", [Predicate::new("q", 0)], vec![Rule::fact(atom0("q"))])
            .unwrap();
        let w = GroundWorld::build(&[p, q], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let check =
            partial_eval_check(&w, 0, 1, &Start::empty(), SemanticsKind::Fitting).unwrap();
        assert!(check.agree);
        assert_eq!(check.residual.rules.len(), 1);
        assert_eq!(check.residual.rules[0].to_string(), "q.");
    }

    #[test]
    fn partial_eval_carries_the_start_into_the_residual() {
        let c = |s: &str| Term::Const(s.to_string());
        let q = Module::new(
            "q",
            [Predicate::new("q", 0)],
            vec![Rule::new(atom0("q"), vec![Literal::pos(Atom::new("e", vec![c("1")]))])],
        )
        .unwrap();
        let p = Module::new(
            "p",
            [Predicate::new("p", 0)],
            vec![Rule::new(atom0("p"), vec![Literal::pos(atom0("q"))])],
        )
        .unwrap();
        let w = GroundWorld::build(&[p, q], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        let u = &w.universe;
        let start = Start::Atoms(atoms(u, &["e(1)"]));
        for kind in SemanticsKind::ALL {
            let check = partial_eval_check(&w, 0, 1, &start, kind).unwrap();
            assert!(check.agree, "{kind}");
            // the residual defines e as well as q
            assert!(check.residual.defines.contains(&Predicate::new("e", 1)));
        }
    }
}
