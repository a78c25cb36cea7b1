//! Rule programs carved into named modules: syntax, the `defines` contract,
//! dependency analysis between modules, grounding over a shared universe,
//! and goal wrapping.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest ground atom universe a run will materialize.
pub const UNIVERSE_BOUND: usize = 4096;

/// Largest number of ground instances a single rule may expand to.
pub const RULE_INSTANCES_BOUND: usize = 65536;

/// Predicate symbol with its arity; `p/2` style.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Predicate {
    pub name: String,
    pub arity: usize,
}

impl Predicate {
    pub fn new(name: &str, arity: usize) -> Self {
        Predicate { name: name.to_string(), arity }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Const(String),
    Var(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => f.write_str(c),
            Term::Var(v) => f.write_str(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom { pred: pred.to_string(), args }
    }

    pub fn predicate(&self) -> Predicate {
        Predicate::new(&self.pred, self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Const(_)))
    }

    fn variables(&self, out: &mut Vec<String>) {
        for t in &self.args {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { positive: false, atom }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn new(head: Atom, body: Vec<Literal>) -> Self {
        Rule { head, body }
    }

    pub fn fact(head: Atom) -> Self {
        Rule { head, body: Vec::new() }
    }

    /// Variables of the rule in first-occurrence order, head first.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = Vec::new();
        self.head.variables(&mut vars);
        for lit in &self.body {
            lit.atom.variables(&mut vars);
        }
        vars
    }

    /// First variable breaking the safety rule: everything in the head or
    /// in a negative body literal must occur in a positive body atom.
    pub fn unsafe_variable(&self) -> Option<String> {
        let mut bound = Vec::new();
        for lit in self.body.iter().filter(|l| l.positive) {
            lit.atom.variables(&mut bound);
        }
        let mut need = Vec::new();
        self.head.variables(&mut need);
        for lit in self.body.iter().filter(|l| !l.positive) {
            lit.atom.variables(&mut need);
        }
        need.into_iter().find(|v| !bound.contains(v))
    }

    pub fn has_negation(&self) -> bool {
        self.body.iter().any(|l| !l.positive)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            write!(f, " :- ")?;
            for (i, lit) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{lit}")?;
            }
        }
        write!(f, ".")
    }
}

/// A named rule set together with the predicates it is responsible for.
/// Every rule head must use a defined predicate; body predicates may come
/// from anywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module {
    pub name: String,
    pub defines: BTreeSet<Predicate>,
    pub rules: Vec<Rule>,
}

impl Module {
    pub fn new(
        name: &str,
        defines: impl IntoIterator<Item = Predicate>,
        rules: Vec<Rule>,
    ) -> Result<Self> {
        let defines: BTreeSet<Predicate> = defines.into_iter().collect();
        for rule in &rules {
            let head = rule.head.predicate();
            if !defines.contains(&head) {
                return Err(Error::HeadOutsideDefines {
                    module: name.to_string(),
                    predicate: head.to_string(),
                });
            }
        }
        Ok(Module { name: name.to_string(), defines, rules })
    }

    /// Predicates appearing in rule bodies.
    pub fn body_predicates(&self) -> BTreeSet<Predicate> {
        self.rules
            .iter()
            .flat_map(|r| r.body.iter())
            .map(|l| l.atom.predicate())
            .collect()
    }

    /// Every predicate appearing anywhere in the module.
    pub fn predicates(&self) -> BTreeSet<Predicate> {
        let mut out = self.body_predicates();
        out.extend(self.rules.iter().map(|r| r.head.predicate()));
        out.extend(self.defines.iter().cloned());
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut add = |atom: &Atom| {
            for t in &atom.args {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        };
        for rule in &self.rules {
            add(&rule.head);
            for lit in &rule.body {
                add(&lit.atom);
            }
        }
        out
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "module {} defines ", self.name)?;
        for (i, p) in self.defines.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        writeln!(f, " {{")?;
        for rule in &self.rules {
            writeln!(f, "  {rule}")?;
        }
        write!(f, "}}")
    }
}

/// Whether `p` may be layered on top of `q`: no body predicate of `q` is
/// defined by `p`, so evaluating `q` first cannot be invalidated by `p`.
pub fn precedes(p: &Module, q: &Module) -> bool {
    q.body_predicates().is_disjoint(&p.defines)
}

/// Union of two modules; remembers which predicates both sides define,
/// since overlap rules out a modular evaluation plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleUnion {
    pub module: Module,
    pub overlap: Vec<Predicate>,
}

pub fn union_modules(a: &Module, b: &Module) -> ModuleUnion {
    union_all(&format!("{}+{}", a.name, b.name), &[a.clone(), b.clone()])
}

pub fn union_all(name: &str, modules: &[Module]) -> ModuleUnion {
    let mut defines = BTreeSet::new();
    let mut overlap = BTreeSet::new();
    let mut rules = Vec::new();
    for m in modules {
        for p in &m.defines {
            if !defines.insert(p.clone()) {
                overlap.insert(p.clone());
            }
        }
        rules.extend(m.rules.iter().cloned());
    }
    rules.sort();
    rules.dedup();
    let module = Module { name: name.to_string(), defines, rules };
    ModuleUnion { module, overlap: overlap.into_iter().collect() }
}

/// Orders modules so that each one is evaluated after everything it reads
/// from. Returns indices into the input slice; ties break by module name.
/// Requires pairwise-disjoint defines and an acyclic dependency graph.
pub fn stratify(modules: &[Module]) -> Result<Vec<usize>> {
    let mut owner: BTreeMap<&Predicate, usize> = BTreeMap::new();
    for (i, m) in modules.iter().enumerate() {
        for p in &m.defines {
            if let Some(&first) = owner.get(p) {
                return Err(Error::OverlappingDefines {
                    predicate: p.to_string(),
                    first: modules[first].name.clone(),
                    second: m.name.clone(),
                });
            }
            owner.insert(p, i);
        }
    }
    // deps[i] = modules whose definitions i reads
    let deps: Vec<BTreeSet<usize>> = modules
        .iter()
        .enumerate()
        .map(|(i, m)| {
            m.body_predicates()
                .iter()
                .filter_map(|p| owner.get(p).copied())
                .filter(|&j| j != i)
                .collect()
        })
        .collect();
    let mut plan = Vec::with_capacity(modules.len());
    let mut placed = vec![false; modules.len()];
    while plan.len() < modules.len() {
        let next = (0..modules.len())
            .filter(|&i| !placed[i] && deps[i].iter().all(|&j| placed[j]))
            .min_by(|&a, &b| modules[a].name.cmp(&modules[b].name));
        match next {
            Some(i) => {
                placed[i] = true;
                plan.push(i);
            }
            None => {
                let mut stuck: Vec<&str> = (0..modules.len())
                    .filter(|&i| !placed[i])
                    .map(|i| modules[i].name.as_str())
                    .collect();
                stuck.sort_unstable();
                return Err(Error::CyclicModules(stuck.join(", ")));
            }
        }
    }
    Ok(plan)
}

/// Name used by [`wrap_goal`]; must not occur in any loaded module.
pub const ANSWER_PREDICATE: &str = "answer";

/// Builds the module `{answer(x̃) ← goal}` where `x̃` lists the goal's
/// variables in first-occurrence order.
pub fn wrap_goal(goal: &[Literal], loaded: &[Module]) -> Result<Module> {
    for m in loaded {
        if m.predicates().iter().any(|p| p.name == ANSWER_PREDICATE) {
            return Err(Error::SymbolClash { predicate: ANSWER_PREDICATE.to_string() });
        }
    }
    let mut vars = Vec::new();
    for lit in goal {
        lit.atom.variables(&mut vars);
    }
    let head = Atom::new(
        ANSWER_PREDICATE,
        vars.iter().map(|v| Term::Var(v.clone())).collect(),
    );
    let rule = Rule::new(head, goal.to_vec());
    if let Some(v) = rule.unsafe_variable() {
        return Err(Error::UnsafeRule { rule: rule.to_string(), variable: v });
    }
    let defines = [Predicate::new(ANSWER_PREDICATE, vars.len())];
    Module::new(ANSWER_PREDICATE, defines, vec![rule])
}

/// Variable-free atom; the unit the ground universe indexes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundAtom {
    pub pred: Predicate,
    pub args: Vec<String>,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred.name)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(","))?;
        }
        Ok(())
    }
}

/// Every predicate applied to every constant tuple: the shared space all
/// modules of a run are grounded against. Atoms are indexed `0..len` in
/// sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomUniverse {
    atoms: Vec<GroundAtom>,
    index: BTreeMap<GroundAtom, u32>,
    constants: Vec<String>,
}

impl AtomUniverse {
    /// Collects constants and predicates from the modules (plus the given
    /// extras) and lays out the full atom space.
    pub fn build(
        modules: &[Module],
        extra_constants: &BTreeSet<String>,
        extra_predicates: &BTreeSet<Predicate>,
    ) -> Result<Self> {
        let mut constants: BTreeSet<String> = extra_constants.clone();
        let mut predicates: BTreeSet<Predicate> = extra_predicates.clone();
        let mut needs_constants = false;
        for m in modules {
            constants.extend(m.constants());
            predicates.extend(m.predicates());
            needs_constants |= m.rules.iter().any(|r| !r.variables().is_empty());
        }
        if needs_constants && constants.is_empty() {
            return Err(Error::NoConstants);
        }
        let mut size = 0usize;
        for p in &predicates {
            let tuples = constants
                .len()
                .checked_pow(p.arity as u32)
                .ok_or(Error::UniverseTooLarge { size: usize::MAX, bound: UNIVERSE_BOUND })?;
            size += tuples;
        }
        if size > UNIVERSE_BOUND {
            return Err(Error::UniverseTooLarge { size, bound: UNIVERSE_BOUND });
        }
        let constants: Vec<String> = constants.into_iter().collect();
        let mut atoms = Vec::with_capacity(size);
        for p in &predicates {
            let mut tuple = vec![0usize; p.arity];
            loop {
                atoms.push(GroundAtom {
                    pred: p.clone(),
                    args: tuple.iter().map(|&i| constants[i].clone()).collect(),
                });
                // odometer over constant indices, last position fastest
                let mut pos = p.arity;
                loop {
                    if pos == 0 {
                        break;
                    }
                    tuple[pos - 1] += 1;
                    if tuple[pos - 1] < constants.len() {
                        break;
                    }
                    tuple[pos - 1] = 0;
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
            }
        }
        atoms.sort();
        atoms.dedup();
        let index = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i as u32))
            .collect();
        Ok(AtomUniverse { atoms, index, constants })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, i: u32) -> &GroundAtom {
        &self.atoms[i as usize]
    }

    pub fn index_of(&self, atom: &GroundAtom) -> Result<u32> {
        self.index
            .get(atom)
            .copied()
            .ok_or_else(|| Error::AtomOutsideUniverse(atom.to_string()))
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    /// Index of the atom with the given rendered form, e.g. `p(a,b)`.
    pub fn find(&self, rendered: &str) -> Option<u32> {
        self.atoms
            .iter()
            .position(|a| a.to_string() == rendered)
            .map(|i| i as u32)
    }

    /// Indices of all atoms whose predicate is in the given set.
    pub fn atoms_of(&self, preds: &BTreeSet<Predicate>) -> BTreeSet<u32> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| preds.contains(&a.pred))
            .map(|(i, _)| i as u32)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundLit {
    pub positive: bool,
    pub atom: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundRule {
    pub head: u32,
    pub body: Vec<GroundLit>,
}

/// A module instantiated over an [`AtomUniverse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundModule {
    pub name: String,
    pub defines: BTreeSet<Predicate>,
    /// Universe indices of every atom over a defined predicate.
    pub def_atoms: BTreeSet<u32>,
    pub rules: Vec<GroundRule>,
    /// Rule positions grouped by head atom.
    pub rules_by_head: BTreeMap<u32, Vec<usize>>,
    pub has_negation: bool,
}

/// Instantiates each rule over every substitution of the universe's
/// constants for its variables. Rules must be safe.
pub fn ground(universe: &AtomUniverse, module: &Module) -> Result<GroundModule> {
    let mut rules = Vec::new();
    for rule in &module.rules {
        if let Some(v) = rule.unsafe_variable() {
            return Err(Error::UnsafeRule { rule: rule.to_string(), variable: v });
        }
        let vars = rule.variables();
        let nconst = universe.constants().len().max(1);
        let count = nconst
            .checked_pow(vars.len() as u32)
            .filter(|&c| c <= RULE_INSTANCES_BOUND)
            .ok_or(Error::BudgetExceeded { size: usize::MAX, bound: RULE_INSTANCES_BOUND })?;
        for code in 0..count {
            let mut binding = BTreeMap::new();
            let mut rest = code;
            for v in &vars {
                binding.insert(v.as_str(), rest % nconst);
                rest /= nconst;
            }
            let inst = |atom: &Atom| -> Result<u32> {
                let args = atom
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Const(c) => c.clone(),
                        Term::Var(v) => universe.constants()[binding[v.as_str()]].clone(),
                    })
                    .collect();
                universe.index_of(&GroundAtom { pred: atom.predicate(), args })
            };
            let head = inst(&rule.head)?;
            let body = rule
                .body
                .iter()
                .map(|l| Ok(GroundLit { positive: l.positive, atom: inst(&l.atom)? }))
                .collect::<Result<Vec<_>>>()?;
            rules.push(GroundRule { head, body });
        }
    }
    rules.sort();
    rules.dedup();
    let mut rules_by_head: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, r) in rules.iter().enumerate() {
        rules_by_head.entry(r.head).or_default().push(i);
    }
    let has_negation = rules.iter().any(|r| r.body.iter().any(|l| !l.positive));
    Ok(GroundModule {
        name: module.name.clone(),
        defines: module.defines.clone(),
        def_atoms: universe.atoms_of(&module.defines),
        rules,
        rules_by_head,
        has_negation,
    })
}

/// [`precedes`] at the ground level: no body atom of `q` is owned by `p`.
pub fn ground_precedes(universe: &AtomUniverse, p: &GroundModule, q: &GroundModule) -> bool {
    q.rules
        .iter()
        .flat_map(|r| r.body.iter())
        .all(|l| !p.defines.contains(&universe.atom(l.atom).pred))
}
