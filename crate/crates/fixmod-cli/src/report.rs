//! Output rendering: plain text and JSON. Both list atoms by their
//! rendered form in lexicographic order, so repeated runs are
//! byte-identical.

use fixmod_core::corpus::SuiteReport;
use fixmod_core::lab::{CensusReport, ContainmentReport, DualityGapReport};
use fixmod_core::logic::AtomUniverse;
use fixmod_core::semantics::{Model, SemanticsKind};
use serde_json::{json, Value};

/// The universe split by truth value under one model.
pub struct ModelSets {
    pub truths: Vec<String>,
    pub falsehoods: Vec<String>,
    pub undefined: Vec<String>,
}

pub fn split_model(universe: &AtomUniverse, model: &Model) -> ModelSets {
    let mut sets = ModelSets {
        truths: Vec::new(),
        falsehoods: Vec::new(),
        undefined: Vec::new(),
    };
    for i in 0..universe.len() as u32 {
        let rendered = universe.atom(i).to_string();
        match model.literal_truth(i, true) {
            Some(true) => sets.truths.push(rendered),
            Some(false) => sets.falsehoods.push(rendered),
            None => sets.undefined.push(rendered),
        }
    }
    sets.truths.sort();
    sets.falsehoods.sort();
    sets.undefined.sort();
    sets
}

pub fn braced(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

pub fn model_text(kind: SemanticsKind, mode: &str, sets: &ModelSets) -> String {
    format!(
        "semantics: {}\nmode: {mode}\ntrue: {}\nfalse: {}\nundefined: {}",
        kind.token(),
        braced(&sets.truths),
        braced(&sets.falsehoods),
        braced(&sets.undefined),
    )
}

pub fn model_json(kind: SemanticsKind, mode: &str, sets: &ModelSets) -> Value {
    json!({
        "semantics": kind.token(),
        "mode": mode,
        "true": sets.truths,
        "false": sets.falsehoods,
        "undefined": sets.undefined,
    })
}

pub fn compare_text(kind: SemanticsKind, modular: &ModelSets, monolithic: &ModelSets, equal: bool) -> String {
    format!(
        "semantics: {}\nmode: compare\nmodular true: {}\nmodular false: {}\nmodular undefined: {}\nmonolithic true: {}\nmonolithic false: {}\nmonolithic undefined: {}\nverdict: {}",
        kind.token(),
        braced(&modular.truths),
        braced(&modular.falsehoods),
        braced(&modular.undefined),
        braced(&monolithic.truths),
        braced(&monolithic.falsehoods),
        braced(&monolithic.undefined),
        if equal { "EQUAL" } else { "DIFFER" },
    )
}

pub fn compare_json(kind: SemanticsKind, modular: &ModelSets, monolithic: &ModelSets, equal: bool) -> Value {
    json!({
        "semantics": kind.token(),
        "mode": "compare",
        "true": modular.truths,
        "false": modular.falsehoods,
        "undefined": modular.undefined,
        "monolithic": {
            "true": monolithic.truths,
            "false": monolithic.falsehoods,
            "undefined": monolithic.undefined,
        },
        "equal": equal,
    })
}

pub fn census_text(kind: &str, report: &CensusReport) -> String {
    let verdict = if report.sound() { "sound" } else { "VIOLATED" };
    let strict = if report.strict_containments > 0 {
        format!(", {} strict containments", report.strict_containments)
    } else {
        String::new()
    };
    format!(
        "{kind} {}: {} cases over {} functions, {verdict}{strict}",
        report.carrier, report.cases, report.functions,
    )
}

pub fn census_json(kind: &str, report: &CensusReport) -> Value {
    let parts: Vec<Value> = report
        .parts
        .iter()
        .map(|p| {
            json!({
                "name": p.name,
                "hypothesis_held": p.hypothesis_held,
                "conclusion_held": p.conclusion_held,
                "both_held": p.both_held,
                "neither_held": p.neither_held,
                "violations": p.violations,
            })
        })
        .collect();
    json!({
        "kind": kind,
        "carrier": report.carrier,
        "functions": report.functions,
        "cases": report.cases,
        "parts": parts,
        "strict_containments": report.strict_containments,
        "sound": report.sound(),
    })
}

pub fn gap_text(gap: &DualityGapReport) -> String {
    format!(
        "downward gap: joint closure at top {}, nested closures reach {}, {}",
        gap.joint_at_top,
        gap.nested_at_top,
        if gap.as_expected { "as expected" } else { "UNEXPECTED" },
    )
}

pub fn gap_json(gap: &DualityGapReport) -> Value {
    json!({
        "f_monotone_decreasing": gap.f_monotone_decreasing,
        "g_monotone_decreasing": gap.g_monotone_decreasing,
        "condition_holds": gap.condition_holds,
        "joint_at_top": gap.joint_at_top,
        "nested_at_top": gap.nested_at_top,
        "as_expected": gap.as_expected,
    })
}

pub fn containment_text(report: &ContainmentReport) -> String {
    format!(
        "strict containment: shared fixedpoints {{{}}} inside {{{}}}, {}",
        report.f1.fpt.join(", "),
        report.g.fpt.join(", "),
        if report.as_expected { "as expected" } else { "UNEXPECTED" },
    )
}

pub fn containment_json(report: &ContainmentReport) -> Value {
    let sets = |s: &fixmod_core::lab::SetsSummary| {
        json!({ "pre": s.pre, "post": s.post, "fpt": s.fpt })
    };
    json!({
        "f1": sets(&report.f1),
        "g": sets(&report.g),
        "f2": sets(&report.f2),
        "monotone": report.monotone,
        "sandwich_holds": report.sandwich_holds,
        "fpt_agree": report.fpt_agree,
        "strict": report.strict,
        "as_expected": report.as_expected,
    })
}

pub fn suite_text(report: &SuiteReport) -> String {
    let verdict = |failed: &Vec<usize>| {
        if failed.is_empty() {
            "all agree".to_string()
        } else {
            format!("FAILED at items {failed:?}")
        }
    };
    format!(
        "corpus: seed {}, {} items ({} definite)\nequivalence: {}\ndominance: {}\nresiduals: {}\nmonotonicity: {} pairs checked, {} skipped, {} violations\ngoals: {} checks, {} failures\nverdict: {}",
        report.seed,
        report.items,
        report.definite_items,
        verdict(&report.equivalence_failures),
        verdict(&report.dominance_failures),
        verdict(&report.residual_failures),
        report.monotone_checked,
        report.monotone_skipped,
        report.monotone_violations,
        report.goal_checks,
        report.goal_failures.len(),
        if report.ok() { "ok" } else { "FAILED" },
    )
}

pub fn suite_json(report: &SuiteReport) -> Value {
    json!({
        "mode": "corpus",
        "seed": report.seed,
        "items": report.items,
        "definite_items": report.definite_items,
        "equivalence_failures": report.equivalence_failures,
        "dominance_failures": report.dominance_failures,
        "residual_failures": report.residual_failures,
        "monotone_checked": report.monotone_checked,
        "monotone_skipped": report.monotone_skipped,
        "monotone_violations": report.monotone_violations,
        "goal_checks": report.goal_checks,
        "goal_failures": report.goal_failures,
        "ok": report.ok(),
    })
}
