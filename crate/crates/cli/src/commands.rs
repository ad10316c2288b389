use std::collections::BTreeMap;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use invsg::boolean::BooleanInvSemigroup;
use invsg::completion::{
    booleanization_checks, booleanization_factorisation_check, booleanize, ck_generators, ck_ideal, ck_ideal_checks,
    ck_product_closure_check, completion_factorisation_check, completion_routes_check,
    cover_to_join_reduction_checks, exel_completion, BooleanizationResult,
};
use invsg::cuntz::{
    boundary_action, cover_from_prefix_code, cuntz_inverse, cuntz_join, cuntz_leq, cuntz_multiply, format_word,
    parse_code, parse_element, parse_word, verify_ck_relation_with, verify_equality_oracle, verify_prefix_code,
    CkOptions, JoinOutcome,
};
use invsg::filters::{
    boundary_identities, boundary_on_idempotents, filter_d, filter_property_checks, filter_r, irredundant_covers,
    minimal_covers, proper_filters, tight_filters, ultrafilters, ultrafilters_by_maximality, Filter,
};
use invsg::groupoid::{duality_checks, duality_checks_groupoid, stone_groupoid};
use invsg::suites::{boolean_suite, booleanization_suite};
use invsg::{fixtures, Check, CheckReport, ElementId, InverseSemigroupTable};

use crate::document::{canonical_text, describe_violation, digest, print_document, Document, Payload};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Order,
    Covers,
    Filters,
    Ultrafilters,
    Tight,
    Boundary,
    Booleanize,
    CkIdeal,
    Exel,
    /// Every homomorphism into a Boolean target factors uniquely through B(S).
    VerifyBooleanization,
    /// Every cover-to-join map into a Boolean target factors uniquely through T(S).
    VerifyCompletion,
    /// The quotient and tight-groupoid constructions of T(S) agree.
    VerifyRoutes,
    /// Filter, Booleanization, ideal and Boolean-operation check suites.
    VerifySuites,
    Duality,
    CuntzEval,
    CuntzVerify,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    pub fn needs_semigroup(self) -> bool {
        !matches!(self, Command::CuntzEval | Command::CuntzVerify)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub seed: Option<u64>,
    pub n: usize,
    pub depth: Option<usize>,
    pub code: Option<String>,
    pub expr: Option<String>,
    pub other: Option<String>,
    pub word: Option<String>,
    pub samples: usize,
    pub targets: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub name: String,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: InputInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: &'static str,
    pub passed: bool,
    pub results: Value,
}

struct Outcome {
    passed: bool,
    results: Value,
}

impl Outcome {
    fn info(results: Value) -> Self {
        Outcome { passed: true, results }
    }

    fn checked(results: Value, reports: &[CheckReport]) -> Self {
        Outcome { passed: reports.iter().all(CheckReport::passed), results }
    }
}

fn labels_of(t: &InverseSemigroupTable, xs: impl IntoIterator<Item = ElementId>) -> Vec<String> {
    xs.into_iter().map(|x| t.label(x).to_string()).collect()
}

fn filter_json(t: &InverseSemigroupTable, f: Filter) -> Value {
    json!({
        "min": t.label(f.min),
        "members": labels_of(t, f.members(t)),
        "identity": f.is_identity(t),
        "d": t.label(filter_d(t, f).min),
        "r": t.label(filter_r(t, f).min),
    })
}

fn filter_mins(t: &InverseSemigroupTable, fs: &[Filter]) -> Vec<String> {
    labels_of(t, fs.iter().map(|f| f.min))
}

fn boolean_target(name: &str) -> Result<BooleanInvSemigroup, CliError> {
    let t = if name.eq_ignore_ascii_case("TWO") { fixtures::two() } else { crate::document::builtin(name)? };
    BooleanInvSemigroup::from_table(t).map_err(|e| CliError::Input(format!("target {name}: {e}")))
}

fn targets(opts: &Options) -> Result<Vec<(String, BooleanInvSemigroup)>, CliError> {
    let names: Vec<String> = if opts.targets.is_empty() {
        ["TWO", "SL22", "I2"].map(String::from).to_vec()
    } else {
        opts.targets.clone()
    };
    names.into_iter().map(|n| Ok((n.clone(), boolean_target(&n)?))).collect()
}

fn describe_b(bres: &BooleanizationResult, xs: &[ElementId]) -> Vec<String> {
    xs.iter().map(|&x| bres.describe(x)).collect()
}

pub fn run_command(cmd: Command, doc: Option<&Document>, opts: &Options) -> Result<Report, CliError> {
    let (input, outcome) = if cmd.needs_semigroup() {
        let doc = doc.ok_or_else(|| CliError::Input("this command needs --input or --builtin".into()))?;
        run_semigroup_command(cmd, doc, opts)?
    } else {
        let text = format!(
            "n={} expr={:?} other={:?} word={:?} depth={:?} code={:?} samples={}",
            opts.n, opts.expr, opts.other, opts.word, opts.depth, opts.code, opts.samples
        );
        let input = InputInfo { name: format!("C{}", opts.n), digest: digest(&text), order: None };
        (input, run_cuntz_command(cmd, opts)?)
    };
    let seed = match cmd {
        Command::CuntzVerify if opts.code.is_none() => Some(opts.seed.unwrap_or(0)),
        _ => opts.seed,
    };
    Ok(Report {
        command: cmd.name(),
        input,
        seed,
        version: env!("CARGO_PKG_VERSION"),
        passed: outcome.passed,
        results: outcome.results,
    })
}

fn raw_digest(doc: &Document) -> Result<(String, usize), CliError> {
    match &doc.payload {
        Payload::Table { labels, rows } => {
            let mut text = labels.join(" ");
            text.push('\n');
            for r in rows {
                text.push_str(&r.iter().map(|&i| labels.get(i).map_or("?", String::as_str)).collect::<Vec<_>>().join(" "));
                text.push('\n');
            }
            Ok((digest(&text), labels.len()))
        }
        Payload::Semigroup(t) => Ok((digest(&canonical_text(t)), t.order())),
    }
}

fn run_semigroup_command(cmd: Command, doc: &Document, opts: &Options) -> Result<(InputInfo, Outcome), CliError> {
    let (dig, order) = raw_digest(doc)?;
    let input = InputInfo { name: doc.name.clone(), digest: dig, order: Some(order) };
    if cmd == Command::Validate {
        let (labels, rep) = doc.validation()?;
        let violations: Vec<String> = rep.violations.iter().map(|v| describe_violation(v, &labels)).collect();
        let normalized = if rep.is_valid() { Some(print_document(&doc.name, &doc.semigroup()?)) } else { None };
        let results = json!({
            "order": rep.order,
            "valid": rep.is_valid(),
            "monoid": rep.is_monoid(),
            "identity": rep.identity.map(|i| labels[i.index()].clone()),
            "unique_inverses": rep.unique_inverses,
            "violations": violations,
            "document": normalized,
        });
        return Ok((input, Outcome { passed: rep.is_valid(), results }));
    }
    let t = doc.semigroup()?;
    let outcome = match cmd {
        Command::Validate => unreachable!("handled above"),
        Command::Order => {
            let elements: Vec<Value> = t
                .elements()
                .map(|a| {
                    json!({
                        "label": t.label(a),
                        "inverse": t.label(t.inv(a)),
                        "idempotent": t.is_idempotent(a),
                        "d": t.label(t.d(a)),
                        "r": t.label(t.r(a)),
                        "below": labels_of(&t, t.down_set(a).iter().copied()),
                    })
                })
                .collect();
            let classes: Vec<Vec<String>> = t.d_class_partition().into_iter().map(|c| labels_of(&t, c)).collect();
            Outcome::info(json!({
                "order": t.order(),
                "identity": t.identity().map(|i| t.label(i)),
                "elements": elements,
                "d_classes": classes,
            }))
        }
        Command::Covers => {
            let mut out = Vec::new();
            for a in t.nonzero() {
                let minimal: Vec<String> = minimal_covers(&t, a)?.iter().map(|c| c.describe(&t)).collect();
                let irredundant: Vec<String> = irredundant_covers(&t, a)?.iter().map(|c| c.describe(&t)).collect();
                out.push(json!({ "element": t.label(a), "minimal": minimal, "irredundant": irredundant }));
            }
            Outcome::info(json!({ "covers": out }))
        }
        Command::Filters => {
            let fs = proper_filters(&t);
            let ultra = ultrafilters(&t);
            let tight = tight_filters(&t)?;
            let list: Vec<Value> = fs
                .iter()
                .map(|&f| {
                    let mut v = filter_json(&t, f);
                    v["ultra"] = json!(ultra.contains(&f));
                    v["tight"] = json!(tight.contains(&f));
                    v
                })
                .collect();
            Outcome::info(json!({ "count": fs.len(), "filters": list }))
        }
        Command::Ultrafilters => {
            let ultra = ultrafilters(&t);
            let by_max = ultrafilters_by_maximality(&t);
            let check = Check::single("atoms agree with maximal proper filters", ultra == by_max, || {
                format!("{:?} against {:?}", filter_mins(&t, &ultra), filter_mins(&t, &by_max))
            });
            let rep = report_of("ultrafilters", check);
            Outcome::checked(json!({ "ultrafilters": filter_mins(&t, &ultra), "checks": rep }), &[rep])
        }
        Command::Tight => {
            let tight = tight_filters(&t)?;
            let ultra = ultrafilters_by_maximality(&t);
            let check = Check::single("tight filters are the ultrafilters", tight == ultra, || {
                format!("{:?} against {:?}", filter_mins(&t, &tight), filter_mins(&t, &ultra))
            });
            let rep = report_of("tight filters", check);
            Outcome::checked(json!({ "tight": filter_mins(&t, &tight), "checks": rep }), &[rep])
        }
        Command::Boundary => {
            let ids = boundary_identities(&t)?;
            let on_e = boundary_on_idempotents(&t);
            let mins: Vec<ElementId> = ids.iter().map(|f| f.min).collect();
            let check = Check::single("identity filters agree with the computation on E(S)", mins == on_e, || {
                format!("{:?} against {:?}", labels_of(&t, mins.clone()), labels_of(&t, on_e.clone()))
            });
            let rep = report_of("boundary", check);
            Outcome::checked(json!({ "boundary": filter_mins(&t, &ids), "checks": rep }), &[rep])
        }
        Command::Booleanize => {
            let bres = booleanize(&t)?;
            let b = bres.algebra();
            let beta: BTreeMap<String, String> =
                t.elements().map(|a| (t.label(a).to_string(), bres.describe(bres.u_set(a)))).collect();
            let rep = booleanization_checks(&bres);
            Outcome::checked(
                json!({
                    "order": b.order(),
                    "elements": describe_b(&bres, &b.elements().collect::<Vec<_>>()),
                    "beta": beta,
                    "basis_elements": bres.basis_index.len(),
                    "checks": rep,
                }),
                &[rep],
            )
        }
        Command::CkIdeal => {
            let bres = booleanize(&t)?;
            let ideal = ck_ideal(&bres)?;
            let routes = ck_ideal_checks(&bres)?;
            let products = ck_product_closure_check(&bres)?;
            Outcome::checked(
                json!({
                    "size": ideal.len(),
                    "generators": describe_b(&bres, &ck_generators(&bres)?),
                    "members": describe_b(&bres, ideal.members()),
                    "checks": [&routes, &products],
                }),
                &[routes, products],
            )
        }
        Command::Exel => {
            let c = exel_completion(&t)?;
            let bres = &c.booleanization;
            let mut classes: Vec<Vec<String>> = vec![Vec::new(); c.algebra.order()];
            for a in bres.algebra().elements() {
                classes[c.from_booleanization.apply(a).index()].push(bres.describe(a));
            }
            let tau: BTreeMap<String, usize> =
                t.elements().map(|a| (t.label(a).to_string(), c.tau.apply(a).index())).collect();
            Outcome::info(json!({
                "booleanization_order": bres.algebra().order(),
                "ideal_order": c.ck_ideal.len(),
                "completion_order": c.algebra.order(),
                "classes": classes,
                "tau": tau,
                "boundary": filter_mins(&t, &c.boundary),
            }))
        }
        Command::VerifyBooleanization | Command::VerifyCompletion => {
            let mut reps = Vec::new();
            for (_, tgt) in targets(opts)? {
                reps.push(if cmd == Command::VerifyBooleanization {
                    booleanization_factorisation_check(&t, &tgt)?
                } else {
                    completion_factorisation_check(&t, &tgt)?
                });
            }
            let names: Vec<String> = targets(opts)?.into_iter().map(|(n, _)| n).collect();
            Outcome::checked(json!({ "targets": names, "checks": reps }), &reps)
        }
        Command::VerifyRoutes => {
            let c = exel_completion(&t)?;
            let rep = completion_routes_check(&t)?;
            Outcome::checked(
                json!({
                    "booleanization_order": c.booleanization.algebra().order(),
                    "completion_order": c.algebra.order(),
                    "checks": rep,
                }),
                &[rep],
            )
        }
        Command::VerifySuites => {
            let tg: Vec<BooleanInvSemigroup> = targets(opts)?.into_iter().map(|(_, b)| b).collect();
            let mut reps = vec![
                filter_property_checks(&t)?,
                booleanization_suite(&doc.name, &t)?,
                ck_ideal_checks(&booleanize(&t)?)?,
                cover_to_join_reduction_checks(&t, &tg)?,
            ];
            if let Ok(b) = BooleanInvSemigroup::from_table(t.clone()) {
                let named: Vec<(String, BooleanInvSemigroup)> = targets(opts)?;
                reps.push(boolean_suite(&doc.name, &b, &named)?);
            }
            Outcome::checked(json!({ "checks": reps }), &reps)
        }
        Command::Duality => {
            let b = BooleanInvSemigroup::from_table(t.clone())
                .map_err(|e| CliError::Input(format!("duality needs a Boolean inverse semigroup: {e}")))?;
            let g = stone_groupoid(&b)?;
            let reps = vec![duality_checks(&b)?, duality_checks_groupoid(&g)?];
            let arrows: Vec<Value> = (0..g.arrow_count())
                .map(|a| json!({ "arrow": g.label(a), "d": g.label(g.d(a)), "r": g.label(g.r(a)) }))
                .collect();
            Outcome::checked(json!({ "stone_groupoid": arrows, "checks": reps }), &reps)
        }
        Command::CuntzEval | Command::CuntzVerify => unreachable!("handled by run_cuntz_command"),
    };
    Ok((input, outcome))
}

fn report_of(subject: &str, check: Check) -> CheckReport {
    let mut rep = CheckReport::new(subject);
    rep.push(check);
    rep
}

fn run_cuntz_command(cmd: Command, opts: &Options) -> Result<Outcome, CliError> {
    let n = opts.n;
    match cmd {
        Command::CuntzEval => {
            let text = opts.expr.as_deref().ok_or_else(|| CliError::Input("cuntz-eval needs --expr".into()))?;
            let a = parse_element(n, text)?;
            let mut results = json!({
                "normal_form": a.to_string(),
                "inverse": cuntz_inverse(&a).to_string(),
                "idempotent": a.is_idempotent(),
            });
            if let Some(other) = &opts.other {
                let b = parse_element(n, other)?;
                results["other"] = json!(b.to_string());
                results["product"] = json!(cuntz_multiply(&a, &b)?.to_string());
                results["join"] = match cuntz_join(&a, &b)? {
                    JoinOutcome::Joined(j) => json!(j.to_string()),
                    JoinOutcome::Incompatible => json!("incompatible"),
                };
                results["leq"] = json!(cuntz_leq(&a, &b)?);
                results["equal"] = json!(a == b);
            }
            if let Some(w) = &opts.word {
                let w = parse_word(n, w)?;
                let k = opts.depth.unwrap_or(w.len());
                if w.len() != k {
                    return Err(CliError::Input(format!("--word has length {} but --depth is {k}", w.len())));
                }
                let image = boundary_action(&a, &w, k)?;
                results["action"] = json!({
                    "word": format_word(&w),
                    "depth": k,
                    "image": image.map(|x| format_word(&x)),
                });
            }
            Ok(Outcome::info(results))
        }
        Command::CuntzVerify => {
            if let Some(code) = &opts.code {
                let code = parse_code(n, code)?;
                let cover = cover_from_prefix_code(n, &code)?;
                let verdict = verify_prefix_code(n, &code)?;
                let parts: Vec<String> = cover.parts.iter().map(ToString::to_string).collect();
                let rep = report_of(
                    "prefix code",
                    Check::single("idempotents are orthogonal and join to 1", verdict.is_ok(), || {
                        verdict.clone().unwrap_err()
                    }),
                );
                let join = if verdict.is_ok() { "e>e".to_string() } else { verdict.clone().unwrap_err() };
                return Ok(Outcome::checked(json!({ "parts": parts, "join": join, "checks": rep }), &[rep]));
            }
            let seed = opts.seed.unwrap_or(0);
            let rel = verify_ck_relation_with(n, CkOptions { seed, samples: opts.samples, ..Default::default() })?;
            let eq = verify_equality_oracle(n, opts.samples, seed)?;
            Ok(Outcome::checked(json!({ "checks": [&rel, &eq] }), &[rel, eq]))
        }
        _ => unreachable!("semigroup commands are handled elsewhere"),
    }
}
