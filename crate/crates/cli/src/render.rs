use std::fmt::Write;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use oddtorsion::classify::audit::{AuditReport, Discrepancy};
use oddtorsion::classify::{FieldKind, GlobalRepReport, LocalRepDescriptor, MultTypeResult, RepKind};
use oddtorsion::families::{FamilyParams, MinimalDiscriminant};
use oddtorsion::numtheory::SquareClass;
use oddtorsion::tate::LocalReductionData;

/// Integers past 2^53 - 1 become decimal strings.
pub fn int(n: &BigInt) -> Value {
    if n.magnitude().bits() <= 53 {
        let v: i64 = n.try_into().expect("fits in 53 bits");
        Value::from(v)
    } else {
        Value::String(n.to_string())
    }
}

fn class(c: &SquareClass) -> Value {
    int(&c.representative())
}

pub fn params(p: &FamilyParams) -> Value {
    let mut m = Map::new();
    m.insert("torsion".into(), p.torsion.tag().into());
    m.insert("a".into(), int(&p.a));
    if !p.torsion.is_single_parameter() {
        m.insert("b".into(), int(&p.b));
    }
    Value::Object(m)
}

pub fn representation(kind: &RepKind) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), kind.name().into());
    match kind {
        RepKind::UnramifiedPrincipalSeries | RepKind::Steinberg => {}
        RepKind::RamifiedPrincipalSeries { a_chi, ord_chi } => {
            m.insert("a_chi".into(), (*a_chi).into());
            m.insert("ord_chi".into(), (*ord_chi).into());
        }
        RepKind::TwistedSteinberg { twist_class, a_twist } => {
            m.insert("twist_class".into(), class(twist_class));
            m.insert("a_twist".into(), (*a_twist).into());
            m.insert("twist_unramified".into(), (*a_twist == 0).into());
        }
        RepKind::DihedralSupercuspidal {
            field,
            field_disc_class,
            a_xi,
            ord_xi,
        } => {
            let f = match field {
                FieldKind::Unramified => "unramified",
                FieldKind::Ramified => "ramified",
            };
            m.insert("field".into(), f.into());
            if let Some(c) = field_disc_class {
                m.insert("field_disc_class".into(), class(c));
            }
            m.insert("a_xi".into(), (*a_xi).into());
            m.insert("ord_xi".into(), (*ord_xi).into());
        }
    }
    Value::Object(m)
}

/// One local entry of a classify report.
pub struct LocalView<'a> {
    pub rep: &'a LocalRepDescriptor,
    pub oracle: &'a LocalReductionData,
    pub mult: Option<&'a MultTypeResult>,
}

fn local(view: &LocalView<'_>) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), int(&view.rep.p));
    m.insert("kodaira".into(), view.oracle.kodaira.to_string().into());
    m.insert("f_p".into(), view.rep.f_p.into());
    if let Some(r) = view.mult {
        m.insert("n".into(), r.n.into());
        m.insert("split".into(), r.split.into());
        m.insert("mult_rule_id".into(), r.rule_id.into());
    }
    m.insert("rule_id".into(), view.rep.rule_id.clone().into());
    m.insert("representation".into(), representation(&view.rep.kind));
    Value::Object(m)
}

pub fn classify(report: &GlobalRepReport, md: &MinimalDiscriminant, locals: &[LocalView<'_>]) -> Value {
    let mut m = match params(&report.params) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    if let Some(c3) = &report.params.c3 {
        m.insert(
            "c3_decomposition".into(),
            json!({ "c": int(&c3.c), "d": int(&c3.d), "e": int(&c3.e) }),
        );
    }
    m.insert("gamma".into(), int(&md.gamma));
    m.insert("u_t".into(), int(&md.u));
    m.insert("minimal_discriminant".into(), int(&md.delta));
    m.insert("conductor".into(), int(&report.conductor));
    m.insert("locals".into(), locals.iter().map(local).collect());
    m.insert("infinity".into(), report.infinity_label.into());
    Value::Object(m)
}

pub fn classify_text(report: &GlobalRepReport, md: &MinimalDiscriminant, locals: &[LocalView<'_>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", report.params);
    if let Some(c3) = &report.params.c3 {
        let _ = writeln!(s, "a = c^3 d^2 e with c = {}, d = {}, e = {}", c3.c, c3.d, c3.e);
    }
    let _ = writeln!(s, "minimal discriminant {} (gamma {}, u {})", md.delta, md.gamma, md.u);
    let _ = writeln!(s, "conductor {}", report.conductor);
    let _ = writeln!(
        s,
        "{:>8}  {:<6} {:>3}  {:<9} {:<14} representation",
        "p", "type", "f", "mult", "rule"
    );
    for v in locals {
        let mult = v
            .mult
            .map(|r| format!("I{} {}", r.n, if r.split { "S" } else { "NS" }))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            s,
            "{:>8}  {:<6} {:>3}  {:<9} {:<14} {}",
            v.rep.p,
            v.oracle.kodaira.to_string(),
            v.rep.f_p,
            mult,
            v.rep.rule_id,
            v.rep.kind
        );
    }
    let _ = writeln!(s, "infinity: {}", report.infinity_label);
    s
}

fn discrepancy(d: &Discrepancy) -> Value {
    json!({
        "params": params(&d.params),
        "p": d.p.as_ref().map_or(Value::Null, int),
        "check": d.check.name(),
        "table_verdict": d.table_verdict,
        "oracle_verdict": d.oracle_verdict,
        "rule_id": d.rule_id,
    })
}

pub fn verify(report: &AuditReport, families: &[&str]) -> Value {
    json!({
        "bound": report.bound,
        "families": families,
        "instances": report.instances,
        "primes_checked": report.primes_checked,
        "comparisons": report.comparisons,
        "discrepancies": report.discrepancies.iter().map(discrepancy).collect::<Vec<_>>(),
        "incomplete": report
            .incomplete
            .iter()
            .map(|(p, reason)| json!({ "params": params(p), "reason": reason }))
            .collect::<Vec<_>>(),
    })
}

pub fn verify_text(report: &AuditReport, families: &[&str]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "families {}", families.join(" "));
    let _ = writeln!(
        s,
        "bound {}: {} instances, {} bad primes, {} comparisons",
        report.bound, report.instances, report.primes_checked, report.comparisons
    );
    let _ = writeln!(s, "discrepancies {}", report.discrepancies.len());
    for d in &report.discrepancies {
        let _ = writeln!(s, "  {d}");
    }
    let _ = writeln!(s, "incomplete {}", report.incomplete.len());
    for (p, reason) in &report.incomplete {
        let _ = writeln!(s, "  {p}: {reason}");
    }
    s
}

fn reduction(d: &LocalReductionData) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), int(&d.p));
    m.insert("kodaira".into(), d.kodaira.to_string().into());
    m.insert("f_p".into(), d.f_p.into());
    m.insert("n".into(), d.n.into());
    m.insert("min_disc_valuation".into(), d.min_disc_valuation.into());
    if let Some(s) = d.split {
        m.insert("split".into(), s.into());
    }
    Value::Object(m)
}

pub fn tate(coeffs: &[BigInt; 5], disc: &BigInt, conductor: Option<&BigInt>, locals: &[LocalReductionData]) -> Value {
    let mut m = Map::new();
    m.insert("coefficients".into(), coeffs.iter().map(int).collect());
    m.insert("discriminant".into(), int(disc));
    if let Some(n) = conductor {
        m.insert("conductor".into(), int(n));
    }
    m.insert("locals".into(), locals.iter().map(reduction).collect());
    Value::Object(m)
}

pub fn tate_text(
    coeffs: &[BigInt; 5],
    disc: &BigInt,
    conductor: Option<&BigInt>,
    locals: &[LocalReductionData],
) -> String {
    let mut s = String::new();
    let names: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(s, "[{}]", names.join(", "));
    let _ = writeln!(s, "discriminant {disc}");
    if let Some(n) = conductor {
        let _ = writeln!(s, "conductor {n}");
    }
    let _ = writeln!(s, "{:>8}  {:<6} {:>3} {:>4}  split", "p", "type", "f", "v(D)");
    for d in locals {
        let split = match d.split {
            Some(true) => "yes",
            Some(false) => "no",
            None => "-",
        };
        let _ = writeln!(
            s,
            "{:>8}  {:<6} {:>3} {:>4}  {split}",
            d.p,
            d.kodaira.to_string(),
            d.f_p,
            d.min_disc_valuation
        );
    }
    s
}
