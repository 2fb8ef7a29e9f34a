//! Traceability matrix: every rule, its formula, and how often a sweep hits
//! it.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;

use super::rules::{self, Ctx};
use super::{matching_mult_type_rules, mult_primes, rep_candidates};
use crate::families::{self, TorsionStructure};
use crate::numtheory;

/// Per-rule hit counts over a sweep, keyed by rule id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleHits {
    pub bound: i64,
    pub hits: BTreeMap<&'static str, usize>,
    /// C12 multiplicative primes missed by the repeated-factor variant of
    /// the condition.
    pub c12_literal_misses: usize,
    pub c12_quadratic_primes: usize,
}

impl RuleHits {
    pub fn get(&self, id: &str) -> usize {
        self.hits.get(id).copied().unwrap_or(0)
    }
}

/// Counts rule matches at every prime of every instance in the sweep.
pub fn rule_hits(families: &[TorsionStructure], bound: i64) -> RuleHits {
    let mut out = RuleHits {
        bound,
        ..Default::default()
    };
    for r in rules::MULT_PRIME_RULES {
        out.hits.insert(r.id, 0);
    }
    for r in rules::MULT_TYPE_RULES {
        out.hits.insert(r.id, 0);
    }
    for r in rules::REP_RULES {
        out.hits.insert(r.id, 0);
    }
    for &t in families {
        for params in families::sweep(t, bound) {
            let Ok(primes) = families::gamma_primes(&params) else {
                continue;
            };
            if let Ok(mp) = mult_primes(&params) {
                for (_, id) in mp {
                    *out.hits.entry(id).or_default() += 1;
                }
            }
            for p in &primes {
                for (r, _) in matching_mult_type_rules(&params, p) {
                    *out.hits.entry(r.id).or_default() += 1;
                }
                if let Ok(cands) = rep_candidates(&params, p) {
                    for (id, _) in cands {
                        if let Some(r) = rules::REP_RULES.iter().find(|r| r.id == id) {
                            *out.hits.entry(r.id).or_default() += 1;
                        }
                    }
                }
                if t == TorsionStructure::C12 && p >= &BigInt::from(5) {
                    let ctx = Ctx::new(&params, p);
                    let quad = rules::q6_c12(&ctx) * rules::q2_c12(&ctx) * rules::q3_c12(&ctx);
                    if numtheory::vp_opt(&quad, p).is_some_and(|v| v > 0) {
                        out.c12_quadratic_primes += 1;
                        if !rules::c12_literal_condition(&ctx) {
                            out.c12_literal_misses += 1;
                        }
                    }
                }
            }
        }
    }
    out
}

fn row(md: &mut String, cells: &[String]) {
    let escaped: Vec<String> = cells.iter().map(|c| c.replace('|', "\\|")).collect();
    let _ = writeln!(md, "| {} |", escaped.join(" | "));
}

/// Renders the matrix as markdown. Hit counts come from `hits`.
pub fn render_markdown(hits: &RuleHits) -> String {
    let mut md = String::new();
    let _ = writeln!(md, "# Rule traceability matrix\n");
    let _ = writeln!(
        md,
        "Generated by `oddtorsion matrix`. Hit counts are over all coprime (a, b) with |a|, |b| <= {} \
         and every prime dividing the model discriminant.\n",
        hits.bound
    );

    let _ = writeln!(md, "## Multiplicative primes\n");
    row(
        &mut md,
        &[
            "rule".into(),
            "family".into(),
            "primes".into(),
            "condition".into(),
            "hits".into(),
        ],
    );
    row(&mut md, &vec!["---".to_string(); 5]);
    for r in rules::MULT_PRIME_RULES {
        row(
            &mut md,
            &[
                r.id.into(),
                r.torsion.tag().into(),
                r.scope.to_string(),
                r.condition.into(),
                hits.get(r.id).to_string(),
            ],
        );
    }

    let _ = writeln!(md, "\n## Multiplicative type\n");
    row(
        &mut md,
        &[
            "rule".into(),
            "family".into(),
            "primes".into(),
            "n".into(),
            "condition".into(),
            "type".into(),
            "model".into(),
            "marked".into(),
            "hits".into(),
        ],
    );
    row(&mut md, &vec!["---".to_string(); 9]);
    for r in rules::MULT_TYPE_RULES {
        row(
            &mut md,
            &[
                r.id.into(),
                r.torsion.tag().into(),
                r.scope.to_string(),
                r.n_formula.into(),
                r.condition.into(),
                if r.split { "S" } else { "NS" }.into(),
                r.witness.map_or_else(|| "-".into(), |j| format!("F{j}")),
                if r.starred { "*" } else { "" }.into(),
                hits.get(r.id).to_string(),
            ],
        );
    }

    let _ = writeln!(md, "\n## Local representations\n");
    row(
        &mut md,
        &[
            "rule".into(),
            "family".into(),
            "primes".into(),
            "condition".into(),
            "representation".into(),
            "hits".into(),
        ],
    );
    row(&mut md, &vec!["---".to_string(); 6]);
    for r in rules::REP_RULES {
        row(
            &mut md,
            &[
                r.id.into(),
                r.torsion.tag().into(),
                r.scope.to_string(),
                r.condition.into(),
                r.template.to_string(),
                hits.get(r.id).to_string(),
            ],
        );
    }
    let _ = writeln!(
        md,
        "\nMultiplicative rows not listed above map to St (type S) or to (gamma, .) St with an \
         unramified twist (type NS)."
    );

    let _ = writeln!(md, "\n## Findings\n");
    let _ = writeln!(
        md,
        "- C12, p >= 5: a variant of the condition repeats a^2 - 2ab + 2b^2 in place of a^2 - 6ab + 6b^2. \
         Of {} primes dividing the three quadratics, that variant misses {}. c12.mult.2 uses all three.",
        hits.c12_quadratic_primes, hits.c12_literal_misses
    );
    let _ = writeln!(
        md,
        "- c12.type.5 carries a mark but no NS alternative. It was hit {} times and the oracle reported \
         split reduction every time.",
        hits.get("c12.type.5")
    );
    let _ = writeln!(
        md,
        "- c3.add.1 and c3.add.2 take v_p(a) = 1, 2 mod 3 for both rows (hits: {}, {}); c3.add.11 \
         likewise (hits: {}). Rows first reached with |a| >= 27 are checked by the high-valuation test set.",
        hits.get("c3.add.1"),
        hits.get("c3.add.2"),
        hits.get("c3.add.11")
    );
    let _ = writeln!(
        md,
        "- C3, p = 3 with v_3(a) = 3 and v_3(a - 27b) = 4 matches no row. The oracle gives type II with \
         f_3 = 4 in every such case. The engine reports no rule matched. No instance has |a| <= 20."
    );
    md
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markdown_lists_every_rule() {
        let hits = rule_hits(&[TorsionStructure::C5], 3);
        let md = render_markdown(&hits);
        for r in rules::REP_RULES {
            assert!(md.contains(r.id), "{}", r.id);
        }
        assert!(hits.get("c5.mult.1") > 0);
    }
}
