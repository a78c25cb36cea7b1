//! Endofunctions on finite orders and the combinators on them: pointwise
//! join and meet, composition, the inflation `f(x) ⊔ x`, the upward closure
//! `star` with its downward dual, and the law checkers built from those.

use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ptr;

use crate::order::{Cpo, Enumerable, MeetSemilattice, Poset};
use crate::{Error, Result};

type Step<'d, E> = Rc<dyn Fn(&E) -> Result<E> + 'd>;

/// Total function from a carrier to itself. Cheap to clone; combinators
/// build new closures over shared inner functions.
///
/// Combinators require both operands to wrap the same carrier value (by
/// reference identity) and fail with [`Error::DomainMismatch`] otherwise.
pub struct EndoFn<'d, D: Poset> {
    domain: &'d D,
    run: Step<'d, D::Elem>,
}

impl<'d, D: Poset> Clone for EndoFn<'d, D> {
    fn clone(&self) -> Self {
        EndoFn { domain: self.domain, run: Rc::clone(&self.run) }
    }
}

impl<'d, D: Poset> fmt::Debug for EndoFn<'d, D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("EndoFn")
    }
}

impl<'d, D: Poset> EndoFn<'d, D> {
    pub fn new(domain: &'d D, run: impl Fn(&D::Elem) -> Result<D::Elem> + 'd) -> Self {
        EndoFn { domain, run: Rc::new(run) }
    }

    /// Wraps a function that cannot fail.
    pub fn from_fn(domain: &'d D, run: impl Fn(&D::Elem) -> D::Elem + 'd) -> Self {
        EndoFn::new(domain, move |x| Ok(run(x)))
    }

    pub fn identity(domain: &'d D) -> Self {
        EndoFn::from_fn(domain, Clone::clone)
    }

    pub fn constant(domain: &'d D, value: D::Elem) -> Self {
        EndoFn::from_fn(domain, move |_| value.clone())
    }

    pub fn domain(&self) -> &'d D {
        self.domain
    }

    pub fn apply(&self, x: &D::Elem) -> Result<D::Elem> {
        (self.run)(x)
    }

    fn check_same_domain(&self, other: &Self) -> Result<()> {
        if ptr::eq(self.domain, other.domain) {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    /// `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_same_domain(inner)?;
        let f = self.clone();
        let g = inner.clone();
        Ok(EndoFn::new(self.domain, move |x| f.apply(&g.apply(x)?)))
    }
}

impl<'d, D: Cpo> EndoFn<'d, D> {
    /// Pointwise join `x ↦ self(x) ⊔ other(x)`.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_same_domain(other)?;
        let d = self.domain;
        let f = self.clone();
        let g = other.clone();
        Ok(EndoFn::new(d, move |x| d.join(&f.apply(x)?, &g.apply(x)?)))
    }

    /// `x ↦ self(x) ⊔ x`, the least increasing function above `self`.
    pub fn inflate(&self) -> Self {
        let d = self.domain;
        let f = self.clone();
        EndoFn::new(d, move |x| d.join(x, &f.apply(x)?))
    }

    /// Least fixedpoint of [`inflate`](Self::inflate) above `x`: iterates
    /// `y ↦ y ⊔ f(y)` to stability. The sequence grows strictly until it
    /// stops, so exceeding the carrier's iteration bound means the input
    /// was defective.
    pub fn star(&self, x: &D::Elem) -> Result<D::Elem> {
        let d = self.domain;
        let bound = d.iteration_bound();
        let mut y = x.clone();
        for _ in 0..bound {
            let next = d.join(&y, &self.apply(&y)?)?;
            if next == y {
                return Ok(y);
            }
            y = next;
        }
        Err(Error::IterationDiverged { steps: bound })
    }

    /// Least fixedpoint of `self` above `x`; requires `x ≤ self(x)` and
    /// agrees with [`star`](Self::star) there.
    pub fn lfp_from(&self, x: &D::Elem) -> Result<D::Elem> {
        let d = self.domain;
        let fx = self.apply(x)?;
        if !d.leq(x, &fx) {
            return Err(Error::NotPostFixedpoint(format!(
                "{} !<= {}",
                d.render(x),
                d.render(&fx)
            )));
        }
        let bound = d.iteration_bound();
        let mut y = x.clone();
        for _ in 0..bound {
            let next = self.apply(&y)?;
            if next == y {
                return Ok(y);
            }
            y = next;
        }
        Err(Error::IterationDiverged { steps: bound })
    }
}

impl<'d, D: MeetSemilattice> EndoFn<'d, D> {
    /// Pointwise meet `x ↦ self(x) ⊓ other(x)`, the order dual of
    /// [`plus`](Self::plus).
    pub fn dual_plus(&self, other: &Self) -> Result<Self> {
        self.check_same_domain(other)?;
        let d = self.domain;
        let f = self.clone();
        let g = other.clone();
        Ok(EndoFn::new(d, move |x| Ok(d.meet(&f.apply(x)?, &g.apply(x)?))))
    }

    /// Greatest fixedpoint of `y ↦ y ⊓ self(y)` below `x`, the order dual
    /// of [`star`](Self::star).
    pub fn down_closure(&self, x: &D::Elem) -> Result<D::Elem> {
        let d = self.domain;
        let bound = d.iteration_bound();
        let mut y = x.clone();
        for _ in 0..bound {
            let next = d.meet(&y, &self.apply(&y)?);
            if next == y {
                return Ok(y);
            }
            y = next;
        }
        Err(Error::IterationDiverged { steps: bound })
    }
}

/// What [`EndoFn::classify`] reports. On the finite carriers here every
/// chain is finite, so `continuous` coincides with `monotone`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FnProperties {
    pub monotone: bool,
    pub increasing: bool,
    pub decreasing: bool,
    pub continuous: bool,
}

/// Pre-fixedpoints, post-fixedpoints and fixedpoints of a function, each in
/// carrier enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedpointSets<E> {
    pub pre: Vec<E>,
    pub post: Vec<E>,
    pub fpt: Vec<E>,
}

impl<'d, D: Poset + Enumerable> EndoFn<'d, D> {
    /// Builds a function from an index table: element `i` maps to element
    /// `table[i]`. Panics if the table length differs from the carrier size.
    pub fn from_table(domain: &'d D, table: Vec<usize>) -> Result<Self> {
        assert_eq!(table.len(), domain.size());
        let size = domain.size();
        if let Some(&bad) = table.iter().find(|&&v| v >= size) {
            return Err(Error::UnknownElement { index: bad, size });
        }
        Ok(EndoFn::from_fn(domain, move |x| {
            domain.elem_at(table[domain.index_of(x)])
        }))
    }

    /// The index table of the function over the enumeration order.
    pub fn table(&self) -> Result<Vec<usize>> {
        let d = self.domain;
        (0..d.size())
            .map(|i| Ok(d.index_of(&self.apply(&d.elem_at(i))?)))
            .collect()
    }

    /// Exhaustive pairwise classification over the carrier.
    pub fn classify(&self) -> Result<FnProperties> {
        let d = self.domain;
        let elems = d.elements();
        let images: Vec<D::Elem> =
            elems.iter().map(|x| self.apply(x)).collect::<Result<_>>()?;
        let mut monotone = true;
        let mut increasing = true;
        let mut decreasing = true;
        for (i, x) in elems.iter().enumerate() {
            increasing &= d.leq(x, &images[i]);
            decreasing &= d.leq(&images[i], x);
            for (j, y) in elems.iter().enumerate() {
                if d.leq(x, y) && !d.leq(&images[i], &images[j]) {
                    monotone = false;
                }
            }
        }
        Ok(FnProperties { monotone, increasing, decreasing, continuous: monotone })
    }

    /// `pre = {x : f(x) ≤ x}`, `post = {x : x ≤ f(x)}`, `fpt = pre ∩ post`.
    pub fn fixedpoint_sets(&self) -> Result<FixedpointSets<D::Elem>> {
        let d = self.domain;
        let mut sets = FixedpointSets { pre: Vec::new(), post: Vec::new(), fpt: Vec::new() };
        for x in d.elements() {
            let fx = self.apply(&x)?;
            let below = d.leq(&fx, &x);
            let above = d.leq(&x, &fx);
            if below {
                sets.pre.push(x.clone());
            }
            if above {
                sets.post.push(x.clone());
            }
            if below && above {
                sets.fpt.push(x);
            }
        }
        Ok(sets)
    }
}

/// `f(x) ≤ g(x)` for every carrier element.
pub fn pointwise_leq<'d, D: Poset + Enumerable>(
    f: &EndoFn<'d, D>,
    g: &EndoFn<'d, D>,
) -> Result<bool> {
    let d = f.domain();
    for x in d.elements() {
        if !d.leq(&f.apply(&x)?, &g.apply(&x)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require<'d, D: Poset + Enumerable>(
    role: &str,
    f: &EndoFn<'d, D>,
    monotone: bool,
    increasing: bool,
) -> Result<()> {
    let d = f.domain();
    let elems = d.elements();
    if increasing {
        for x in &elems {
            let fx = f.apply(x)?;
            if !d.leq(x, &fx) {
                return Err(Error::NotIncreasing(format!(
                    "{role}({}) = {} at {}",
                    d.render(x),
                    d.render(&fx),
                    d.render(x)
                )));
            }
        }
    }
    if monotone {
        for x in &elems {
            for y in &elems {
                if d.leq(x, y) && !d.leq(&f.apply(x)?, &f.apply(y)?) {
                    return Err(Error::NotMonotone(format!(
                        "{role}({}) !<= {role}({}) although {} <= {}",
                        d.render(x),
                        d.render(y),
                        d.render(x),
                        d.render(y)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Outcome of one law part: did the hypothesis hold, did the conclusion,
/// and where did the conclusion first fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartVerdict {
    pub name: &'static str,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub witness: Option<String>,
}

impl PartVerdict {
    pub fn sound(&self) -> bool {
        !self.hypothesis_holds || self.conclusion_holds
    }
}

/// Verdicts for the four closure factorization laws on a pair of monotone
/// increasing functions; see [`check_closure_factorization`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationVerdict {
    pub parts: Vec<PartVerdict>,
}

impl FactorizationVerdict {
    /// No part has its hypothesis hold while its conclusion fails.
    pub fn sound(&self) -> bool {
        self.parts.iter().all(PartVerdict::sound)
    }

    pub fn part(&self, name: &str) -> &PartVerdict {
        self.parts.iter().find(|p| p.name == name).expect("unknown part name")
    }
}

pub const FACTORIZATION_PARTS: [&str; 4] = [
    "sum-vs-composition",
    "star-commutation",
    "step-commutation",
    "closure-commutation",
];

/// Checks, exhaustively over the carrier, the four ways the closure of a
/// sum factors:
///
/// * `sum-vs-composition` (no hypothesis): `(f+g)* = (f∘g)* = (g∘f)*`.
/// * `star-commutation` (hypothesis `f*∘g ≥ g∘f*`): `(f+g)* = (f∘g)* = f*∘g*`.
/// * `step-commutation` (hypothesis `f∘g ≥ g∘f`): same conclusion.
/// * `closure-commutation` (hypothesis `f∘g* ≥ g*∘f`): same conclusion.
///
/// Both functions must be monotone and increasing; continuity needs no
/// separate hypothesis on finite carriers.
pub fn check_closure_factorization<'d, D: Cpo + Enumerable>(
    f: &EndoFn<'d, D>,
    g: &EndoFn<'d, D>,
) -> Result<FactorizationVerdict> {
    require("f", f, true, true)?;
    require("g", g, true, true)?;
    let d = f.domain();
    let joint = f.plus(g)?;
    let fg = f.compose(g)?;
    let gf = g.compose(f)?;

    let mut hyp_star = true;
    let mut hyp_step = true;
    let mut hyp_closure = true;
    let mut witness_order = None;
    let mut witness_factor = None;
    for x in d.elements() {
        let gx = g.apply(&x)?;
        hyp_star &= d.leq(&g.apply(&f.star(&x)?)?, &f.star(&gx)?);
        hyp_step &= d.leq(&gf.apply(&x)?, &fg.apply(&x)?);
        hyp_closure &= d.leq(&g.star(&f.apply(&x)?)?, &f.apply(&g.star(&x)?)?);

        let s = joint.star(&x)?;
        let both_compositions = s == fg.star(&x)? && s == gf.star(&x)?;
        if !both_compositions && witness_order.is_none() {
            witness_order = Some(d.render(&x));
        }
        let factored = s == fg.star(&x)? && s == f.star(&g.star(&x)?)?;
        if !factored && witness_factor.is_none() {
            witness_factor = Some(d.render(&x));
        }
    }

    let part = |name, hyp: bool, witness: &Option<String>| PartVerdict {
        name,
        hypothesis_holds: hyp,
        conclusion_holds: witness.is_none(),
        witness: witness.clone(),
    };
    Ok(FactorizationVerdict {
        parts: alloc::vec![
            part(FACTORIZATION_PARTS[0], true, &witness_order),
            part(FACTORIZATION_PARTS[1], hyp_star, &witness_factor),
            part(FACTORIZATION_PARTS[2], hyp_step, &witness_factor),
            part(FACTORIZATION_PARTS[3], hyp_closure, &witness_factor),
        ],
    })
}

/// Verdicts for the six agreement laws on a pointwise-ordered triple
/// `f1 ≤ g ≤ f2`; see [`check_sandwich`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichVerdict<E> {
    pub f1_sets: FixedpointSets<E>,
    pub g_sets: FixedpointSets<E>,
    pub f2_sets: FixedpointSets<E>,
    pub parts: Vec<PartVerdict>,
}

impl<E: Ord> SandwichVerdict<E> {
    pub fn sound(&self) -> bool {
        self.parts.iter().all(PartVerdict::sound)
    }

    pub fn part(&self, name: &str) -> &PartVerdict {
        self.parts.iter().find(|p| p.name == name).expect("unknown part name")
    }

    /// The bounds share their fixedpoints but the middle has strictly more.
    pub fn strict_containment(&self) -> bool {
        self.f1_sets.fpt == self.f2_sets.fpt
            && self.f1_sets.fpt != self.g_sets.fpt
            && self.f1_sets.fpt.iter().all(|x| self.g_sets.fpt.contains(x))
    }
}

pub const SANDWICH_PARTS: [&str; 6] = [
    "pre-agreement",
    "post-agreement",
    "pre-fpt-agreement",
    "post-fpt-agreement",
    "pre-post-agreement",
    "fpt-containment",
];

/// Checks what a function squeezed between two bounds inherits from them:
///
/// * `pre-agreement`: if `PRE(f1) = PRE(f2)` then `PRE(g)` equals both.
/// * `post-agreement`: likewise for `POST`.
/// * `pre-fpt-agreement`: if `PRE` and `FPT` agree across the bounds then
///   `FPT(g)` equals both.
/// * `post-fpt-agreement`: likewise with `POST` in place of `PRE`.
/// * `pre-post-agreement`: if `PRE` and `POST` both agree then `FPT(g)`
///   equals both.
/// * `fpt-containment`: if `FPT(f1) = FPT(f2)` then `FPT(g) ⊇ FPT(f1)`.
///
/// No monotonicity is required, only the pointwise order `f1 ≤ g ≤ f2`.
pub fn check_sandwich<'d, D: Poset + Enumerable>(
    f1: &EndoFn<'d, D>,
    g: &EndoFn<'d, D>,
    f2: &EndoFn<'d, D>,
) -> Result<SandwichVerdict<D::Elem>> {
    let d = f1.domain();
    for x in d.elements() {
        let a = f1.apply(&x)?;
        let b = g.apply(&x)?;
        let c = f2.apply(&x)?;
        if !d.leq(&a, &b) || !d.leq(&b, &c) {
            return Err(Error::NotSandwiched(format!(
                "at {}: {} / {} / {}",
                d.render(&x),
                d.render(&a),
                d.render(&b),
                d.render(&c)
            )));
        }
    }
    let f1_sets = f1.fixedpoint_sets()?;
    let g_sets = g.fixedpoint_sets()?;
    let f2_sets = f2.fixedpoint_sets()?;

    // Sets are in enumeration order, so equality is plain Vec equality.
    let first_diff = |a: &Vec<D::Elem>, b: &Vec<D::Elem>| -> Option<String> {
        let missing = a.iter().find(|x| !b.contains(x));
        let extra = b.iter().find(|x| !a.contains(x));
        missing.or(extra).map(|x| d.render(x))
    };
    let equal_to_both = |s: &Vec<D::Elem>, a: &Vec<D::Elem>, b: &Vec<D::Elem>| {
        first_diff(s, a).or_else(|| first_diff(s, b))
    };

    let pre_eq = f1_sets.pre == f2_sets.pre;
    let post_eq = f1_sets.post == f2_sets.post;
    let fpt_eq = f1_sets.fpt == f2_sets.fpt;

    let part = |name, hyp: bool, witness: Option<String>| PartVerdict {
        name,
        hypothesis_holds: hyp,
        conclusion_holds: witness.is_none(),
        witness,
    };
    let fpt_conclusion = equal_to_both(&g_sets.fpt, &f1_sets.fpt, &f2_sets.fpt);
    let containment = f1_sets
        .fpt
        .iter()
        .find(|x| !g_sets.fpt.contains(x))
        .map(|x| d.render(x));
    let parts = alloc::vec![
        part(SANDWICH_PARTS[0], pre_eq, equal_to_both(&g_sets.pre, &f1_sets.pre, &f2_sets.pre)),
        part(SANDWICH_PARTS[1], post_eq, equal_to_both(&g_sets.post, &f1_sets.post, &f2_sets.post)),
        part(SANDWICH_PARTS[2], pre_eq && fpt_eq, fpt_conclusion.clone()),
        part(SANDWICH_PARTS[3], post_eq && fpt_eq, fpt_conclusion.clone()),
        part(SANDWICH_PARTS[4], pre_eq && post_eq, fpt_conclusion),
        part(SANDWICH_PARTS[5], fpt_eq, containment),
    ];
    Ok(SandwichVerdict { f1_sets, g_sets, f2_sets, parts })
}

/// Verdict of [`check_common_fixedpoints`]: the shared fixedpoints and
/// whether each composite form has exactly that set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonFixedpointVerdict<E> {
    pub common: Vec<E>,
    pub holds: bool,
    pub witness: Option<String>,
}

/// For increasing `f`, `g` verifies that the fixedpoints shared by both are
/// exactly the fixedpoints of `f∘g`, of `g∘f`, and of `f+g`.
pub fn check_common_fixedpoints<'d, D: Cpo + Enumerable>(
    f: &EndoFn<'d, D>,
    g: &EndoFn<'d, D>,
) -> Result<CommonFixedpointVerdict<D::Elem>> {
    require("f", f, false, true)?;
    require("g", g, false, true)?;
    let d = f.domain();
    let common: Vec<D::Elem> = f
        .fixedpoint_sets()?
        .fpt
        .into_iter()
        .filter(|x| g_fixes(g, x).unwrap_or(false))
        .collect();
    let mut witness = None;
    for h in [f.compose(g)?, g.compose(f)?, f.plus(g)?] {
        let fpt = h.fixedpoint_sets()?.fpt;
        if fpt != common && witness.is_none() {
            let diff = fpt
                .iter()
                .find(|x| !common.contains(x))
                .or_else(|| common.iter().find(|x| !fpt.contains(x)));
            witness = diff.map(|x| d.render(x));
        }
    }
    Ok(CommonFixedpointVerdict { common, holds: witness.is_none(), witness })
}

fn g_fixes<'d, D: Poset>(g: &EndoFn<'d, D>, x: &D::Elem) -> Result<bool> {
    Ok(g.apply(x)? == *x)
}
