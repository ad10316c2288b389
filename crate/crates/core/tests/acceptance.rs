//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::Instant;

use invsg::boolean::BooleanInvSemigroup;
use invsg::completion::{
    booleanization_checks, booleanization_factorisation_check, booleanize, ck_product_closure_check,
    completion_factorisation_check, completion_routes_check, exel_completion,
};
use invsg::cuntz::{verify_ck_relation, verify_equality_oracle};
use invsg::filters::{tight_filters, ultrafilters_by_maximality};
use invsg::groupoid::{duality_checks, duality_checks_groupoid, FiniteGroupoid};
use invsg::suites::{boolean_fixtures, boolean_suite};
use invsg::table::find_isomorphism;
use invsg::{exec, fixtures, CheckReport, InverseSemigroupTable};

const RANDOM_COUNT: usize = 200;
const RANDOM_MAX_ORDER: usize = 12;
const EQUALITY_PAIRS: usize = 1000;

type Outcome = Result<String, String>;

fn report_outcome(reps: &[CheckReport]) -> Outcome {
    for rep in reps {
        if let Some(c) = rep.failures().next() {
            return Err(format!("{}: {} ({})", rep.subject, c.name, c.witness.clone().unwrap_or_default()));
        }
    }
    let cases: usize = reps.iter().flat_map(|r| &r.checks).map(|c| c.cases).sum();
    Ok(format!("{} reports, {cases} cases", reps.len()))
}

fn collect(results: Vec<invsg::Result<CheckReport>>) -> Result<Vec<CheckReport>, String> {
    results.into_iter().collect::<invsg::Result<_>>().map_err(|e| e.to_string())
}

fn corpus() -> Vec<(String, InverseSemigroupTable)> {
    let mut out: Vec<(String, InverseSemigroupTable)> =
        fixtures::all().into_iter().map(|f| (f.name.to_string(), f.table)).collect();
    out.extend(
        fixtures::random_sweep(0, RANDOM_COUNT, RANDOM_MAX_ORDER)
            .into_iter()
            .map(|r| (format!("random seed {}", r.seed), r.table)),
    );
    out
}

fn boolean(t: InverseSemigroupTable) -> BooleanInvSemigroup {
    BooleanInvSemigroup::from_table(t).expect("fixture is Boolean")
}

fn grid() -> (Vec<(&'static str, InverseSemigroupTable)>, Vec<(&'static str, BooleanInvSemigroup)>) {
    let sources = vec![
        ("CHAIN3", fixtures::chain3()),
        ("SL22", fixtures::sl22()),
        ("B2", fixtures::b2()),
        ("Z2_0", fixtures::z2_0()),
    ];
    let targets =
        vec![("TWO", boolean(fixtures::two())), ("SL22", boolean(fixtures::sl22())), ("I2", boolean(fixtures::i2()))];
    (sources, targets)
}

fn completion_routes() -> Outcome {
    let corpus = corpus();
    let reps = collect(exec::map(&corpus, |(_, t)| completion_routes_check(t)))?;
    report_outcome(&reps).map(|s| format!("{} semigroups, {s}", corpus.len()))
}

fn completion_factorisation() -> Outcome {
    let (sources, targets) = grid();
    let pairs: Vec<(&InverseSemigroupTable, &BooleanInvSemigroup)> =
        sources.iter().flat_map(|(_, s)| targets.iter().map(move |(_, t)| (s, t))).collect();
    let reps = collect(exec::map(&pairs, |(s, t)| completion_factorisation_check(s, t)))?;
    report_outcome(&reps)
}

fn booleanization_factorisation() -> Outcome {
    let (sources, targets) = grid();
    let pairs: Vec<(&InverseSemigroupTable, &BooleanInvSemigroup)> =
        sources.iter().flat_map(|(_, s)| targets.iter().map(move |(_, t)| (s, t))).collect();
    let reps = collect(exec::map(&pairs, |(s, t)| booleanization_factorisation_check(s, t)))?;
    report_outcome(&reps)
}

fn tight_is_ultra() -> Outcome {
    let corpus = corpus();
    for (name, t) in &corpus {
        let tight = tight_filters(t).map_err(|e| format!("{name}: {e}"))?;
        if tight != ultrafilters_by_maximality(t) {
            return Err(format!("{name}: tight filters differ from ultrafilters"));
        }
    }
    Ok(format!("{} semigroups", corpus.len()))
}

fn duality() -> Outcome {
    let mut reps = Vec::new();
    let b_b2 = booleanize(&fixtures::b2()).map_err(|e| e.to_string())?.algebra().clone();
    for b in [boolean(fixtures::two()), boolean(fixtures::sl22()), boolean(fixtures::i2()), b_b2] {
        reps.push(duality_checks(&b).map_err(|e| e.to_string())?);
    }
    for k in 1..=4 {
        for g in [FiniteGroupoid::pair(k), FiniteGroupoid::discrete(k)] {
            let g = g.map_err(|e| e.to_string())?;
            reps.push(duality_checks_groupoid(&g).map_err(|e| e.to_string())?);
        }
    }
    report_outcome(&reps)
}

fn boolean_suites() -> Outcome {
    let all = boolean_fixtures().map_err(|e| e.to_string())?;
    let targets: Vec<(String, BooleanInvSemigroup)> = all.iter().take(4).cloned().collect();
    let reps = collect(exec::map(&all, |(name, b)| boolean_suite(name, b, &targets)))?;
    report_outcome(&reps)
}

fn booleanization_identities() -> Outcome {
    let mut reps = Vec::new();
    for f in fixtures::all() {
        reps.push(booleanization_checks(&booleanize(&f.table).map_err(|e| e.to_string())?));
    }
    report_outcome(&reps)
}

fn concrete_sizes() -> Outcome {
    let err = |e: invsg::Error| e.to_string();
    let chain3 = exel_completion(&fixtures::chain3()).map_err(err)?;
    let b2 = booleanize(&fixtures::b2()).map_err(err)?;
    let i2 = exel_completion(&fixtures::i2()).map_err(err)?;
    let got = (
        chain3.booleanization.algebra().order(),
        chain3.algebra.order(),
        b2.algebra().order(),
        find_isomorphism(b2.algebra(), &fixtures::i2()).is_some(),
        find_isomorphism(&i2.algebra, &fixtures::i2()).is_some(),
    );
    if got == (4, 2, 7, true, true) {
        Ok("|B(CHAIN3)| = 4, |T(CHAIN3)| = 2, B(B2) ≅ I2 of order 7, T(I2) ≅ I2".into())
    } else {
        Err(format!("got {got:?}"))
    }
}

fn cuntz() -> Outcome {
    let mut reps = Vec::new();
    for n in [2, 3] {
        reps.push(verify_ck_relation(n).map_err(|e| e.to_string())?);
        reps.push(verify_equality_oracle(n, EQUALITY_PAIRS, n as u64).map_err(|e| e.to_string())?);
    }
    report_outcome(&reps)
}

fn ck_products() -> Outcome {
    let mut reps = Vec::new();
    for f in fixtures::all() {
        let bres = booleanize(&f.table).map_err(|e| e.to_string())?;
        reps.push(ck_product_closure_check(&bres).map_err(|e| e.to_string())?);
    }
    report_outcome(&reps)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("quotient and tight-groupoid completions agree, kernel = Cuntz–Krieger ideal", completion_routes),
        ("cover-to-join maps factor uniquely through τ", completion_factorisation),
        ("homomorphisms factor uniquely through β", booleanization_factorisation),
        ("tight filters are the ultrafilters", tight_is_ultra),
        ("S ≅ KB(G(S)) and G ≅ G(KB(G))", duality),
        ("skew operations, ε_I, ideal-induced morphisms, ideal lattice, reductions", boolean_suites),
        ("identities of U_a and U_{a;…} in B(S)", booleanization_identities),
        ("concrete sizes of B(S) and T(S)", concrete_sizes),
        ("Cuntz–Krieger relation and normal-form equality in Cₙ", cuntz),
        ("Cuntz–Krieger ideal absorbs products with basis elements", ck_products),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
