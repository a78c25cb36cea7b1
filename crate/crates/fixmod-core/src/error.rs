use alloc::string::String;
use core::fmt;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

/// Failures across the order, operator, logic and semantics layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Element index outside the carrier.
    UnknownElement { index: usize, size: usize },
    /// A label that is not part of the universe.
    UnknownLabel(String),
    /// The same label given twice for one carrier.
    DuplicateLabel(String),
    /// Relation failed a partial-order axiom after closure.
    NotAPartialOrder(String),
    /// Some pair of elements lacks a least upper or greatest lower bound.
    NotALattice(String),
    /// Constructors need at least one element.
    EmptyCarrier,
    /// Carrier or label universe beyond the configured bound.
    CarrierTooLarge { size: usize, bound: usize },
    /// Join of two literal sets would contain a complementary pair.
    InconsistentJoin(String),
    /// The two functions live on different carriers.
    DomainMismatch,
    /// Iteration failed to stabilize within the domain's bound.
    IterationDiverged { steps: usize },
    /// Operation requires a monotone function.
    NotMonotone(String),
    /// Operation requires an increasing function.
    NotIncreasing(String),
    /// Closure was started from an element above its own image.
    NotPostFixedpoint(String),
    /// The pointwise order f1 <= g <= f2 fails somewhere.
    NotSandwiched(String),
    /// Exhaustive enumeration requested beyond its budget.
    BudgetExceeded { size: usize, bound: usize },
    /// A head or negated variable is not bound by any positive body atom.
    UnsafeRule { rule: String, variable: String },
    /// A rule head's predicate is outside its module's defines set.
    HeadOutsideDefines { module: String, predicate: String },
    /// Rules contain variables but no constant exists to instantiate them.
    NoConstants,
    /// Ground atom universe beyond the configured bound.
    UniverseTooLarge { size: usize, bound: usize },
    /// A ground atom falls outside the universe it is evaluated against.
    AtomOutsideUniverse(String),
    /// Two modules claim the same predicate; no evaluation plan exists.
    OverlappingDefines { predicate: String, first: String, second: String },
    /// Cross-module dependencies form a cycle.
    CyclicModules(String),
    /// The fresh predicate for a wrapped goal already occurs in the program.
    SymbolClash { predicate: String },
    /// Negative body literal reached the definite-program engine.
    NegationInDefinite { rule: String },
    /// An operator derived both an atom and its negation.
    InconsistentResult(String),
    /// Start element mentions a predicate some module defines.
    StartInsideDefines { predicate: String },
    /// Start element has the wrong shape for the chosen semantics.
    BadStart(String),
    /// Evaluation plan is not a valid ordering of the loaded modules.
    BadPlan(String),
    /// Modules are not in the precedence relation the operation requires.
    NotPreceding { dependent: String, base: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownElement { index, size } => {
                write!(f, "element {index} outside carrier of size {size}")
            }
            Error::UnknownLabel(l) => write!(f, "unknown label {l}"),
            Error::DuplicateLabel(l) => write!(f, "duplicate label {l}"),
            Error::NotAPartialOrder(why) => write!(f, "not a partial order: {why}"),
            Error::NotALattice(why) => write!(f, "not a lattice: {why}"),
            Error::EmptyCarrier => write!(f, "carrier must have at least one element"),
            Error::CarrierTooLarge { size, bound } => {
                write!(f, "carrier of size {size} exceeds the bound {bound}")
            }
            Error::InconsistentJoin(what) => {
                write!(f, "join undefined: {what} would be both true and false")
            }
            Error::DomainMismatch => write!(f, "functions live on different carriers"),
            Error::IterationDiverged { steps } => {
                write!(f, "iteration failed to stabilize after {steps} steps")
            }
            Error::NotMonotone(which) => write!(f, "{which} is not monotone"),
            Error::NotIncreasing(which) => write!(f, "{which} is not increasing"),
            Error::NotPostFixedpoint(what) => {
                write!(f, "start element is above its image: {what}")
            }
            Error::NotSandwiched(at) => write!(f, "f1 <= g <= f2 fails at {at}"),
            Error::BudgetExceeded { size, bound } => {
                write!(f, "carrier of size {size} exceeds the enumeration budget {bound}")
            }
            Error::UnsafeRule { rule, variable } => {
                write!(f, "unsafe rule {rule}: variable {variable} has no positive binder")
            }
            Error::HeadOutsideDefines { module, predicate } => {
                write!(f, "module {module} has a rule head for {predicate} outside its defines")
            }
            Error::NoConstants => write!(f, "rules contain variables but no constants exist"),
            Error::UniverseTooLarge { size, bound } => {
                write!(f, "ground atom universe of size {size} exceeds the bound {bound}")
            }
            Error::AtomOutsideUniverse(a) => write!(f, "atom {a} is outside the universe"),
            Error::OverlappingDefines { predicate, first, second } => {
                write!(f, "modules {first} and {second} both define {predicate}")
            }
            Error::CyclicModules(names) => {
                write!(f, "cyclic dependency among modules {names}")
            }
            Error::SymbolClash { predicate } => {
                write!(f, "predicate {predicate} already occurs in the program")
            }
            Error::NegationInDefinite { rule } => {
                write!(f, "negative literal in {rule}: least-model semantics is definite only")
            }
            Error::InconsistentResult(what) => {
                write!(f, "operator derived a contradiction: {what}")
            }
            Error::StartInsideDefines { predicate } => {
                write!(f, "start element mentions {predicate}, which a module defines")
            }
            Error::BadStart(why) => write!(f, "bad start element: {why}"),
            Error::BadPlan(why) => write!(f, "bad evaluation plan: {why}"),
            Error::NotPreceding { dependent, base } => {
                write!(f, "{base} depends on {dependent}; precedence does not hold")
            }
        }
    }
}

impl core::error::Error for Error {}
