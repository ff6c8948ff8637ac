//! Acceptance harness: one PASS/FAIL line per criterion, each with its time
//! limit. Exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p cylindric --test acceptance`.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cylindric::axioms::instantiate_axioms;
use cylindric::forms::{enumerate_degree0, reduce_degree, Color, NormalForm};
use cylindric::frames::{
    check_conditions, check_equation_bruteforce, complex_algebra, Condition, PointForms, DEFAULT_ALGEBRA_BOUND,
};
use cylindric::oracle::{find_noncommuting, oracle_classify, SearchSpace};
use cylindric::random::{random_perturbed_structure, random_term, random_valid_structure, random_valuation, rng_from_seed};
use cylindric::rewriter::{eval_on_form, rewrite, DEFAULT_BUDGET};
use cylindric::splitter::{below_t, sample_below_t, satisfiable_below_t_degree0, split_atom};
use cylindric::term::Term;
use cylindric::witness::is_satisfiable;
use cylindric::{Error, Params, Variant};
use rand::Rng;

/// Satisfiable degree-0 forms at n = 2, m = 1, computed once by the oracle.
const SATISFIABLE_DEGREE0_N2_M1: usize = 8;

struct Outcome {
    passed: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome { passed: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { passed: false, detail: detail.into() }
}

fn p(n: usize, m: usize, v: Variant) -> Params {
    Params::new(n, m, v).unwrap()
}

fn criterion_1() -> Outcome {
    let a = enumerate_degree0(&p(2, 1, Variant::Nca), DEFAULT_BUDGET).unwrap();
    let b = enumerate_degree0(&p(3, 1, Variant::Nca), DEFAULT_BUDGET).unwrap();
    let distinct = a.iter().collect::<BTreeSet<_>>().len() == a.len() && b.iter().collect::<BTreeSet<_>>().len() == b.len();
    if a.len() == 32 && b.len() == 1024 && distinct {
        ok("32 forms at (2,1), 1024 at (3,1), no duplicates")
    } else {
        fail(format!("got {} and {} forms (distinct: {distinct})", a.len(), b.len()))
    }
}

fn criterion_2() -> Outcome {
    let mut rng = rng_from_seed(2);
    let mut structures = 0;
    let mut checks = 0;
    while structures < 120 {
        let variant = if structures % 2 == 0 { Variant::Nca } else { Variant::Wca };
        let params = p(2, 1, variant);
        let Some(s) = random_valid_structure(&params, 4, 0.3, 100, &mut rng) else { continue };
        structures += 1;
        let e = random_valuation(1, s.len(), &mut rng);
        let mut pf = PointForms::new(&s, &e);
        for h in 0..=2 {
            let candidates: BTreeSet<NormalForm> = (0..s.len()).map(|v| pf.form(v, h)).collect();
            for v in 0..s.len() {
                let modeled = candidates.iter().filter(|f| pf.models(v, f)).count();
                checks += 1;
                if modeled != 1 {
                    return fail(format!("node {v} models {modeled} degree-{h} forms"));
                }
                if h > 0 && reduce_degree(&pf.form(v, h), h - 1).unwrap() != pf.form(v, h - 1) {
                    return fail(format!("degree reduction mismatch at node {v}, degree {h}"));
                }
            }
        }
    }
    ok(format!("{structures} structures, {checks} (node, degree) checks, exactly one form each"))
}

fn criterion_3() -> Outcome {
    let mut rng = rng_from_seed(3);
    let (mut agree_pass, mut agree_fail) = (0, 0);
    for round in 0..240 {
        let n = if round % 3 == 2 { 3 } else { 2 };
        let size = rng.random_range(1..=3);
        let s = random_perturbed_structure(n, size, &mut rng);
        let a = complex_algebra(&s, DEFAULT_ALGEBRA_BOUND).unwrap();
        for variant in Variant::ALL {
            let frame = check_conditions(&s, variant).passed();
            let algebra = instantiate_axioms(&p(n, 0, variant))
                .iter()
                .all(|ax| check_equation_bruteforce(&a, &ax.equation, 1 << 20).unwrap());
            if frame != algebra {
                return fail(format!("disagreement ({variant}, n={n}): frame {frame}, axioms {algebra} on {s:?}"));
            }
            if frame {
                agree_pass += 1;
            } else {
                agree_fail += 1;
            }
        }
    }
    ok(format!("240 structures x 2 variants agree ({agree_pass} in the class, {agree_fail} outside)"))
}

fn criterion_4() -> Outcome {
    let sp = SearchSpace::new(p(2, 0, Variant::Nca), 3);
    match find_noncommuting(&sp, 0, 1) {
        Ok(Some((s, x))) => {
            let nca = check_conditions(&s, Variant::Nca).passed();
            let a = complex_algebra(&s, 3).unwrap();
            if nca && a.cyl(0, a.cyl(1, x)) != a.cyl(1, a.cyl(0, x)) {
                ok(format!("{} nodes, X = {x:#b}", s.len()))
            } else {
                fail("reported structure does not refute commutativity")
            }
        }
        Ok(None) => fail("no structure with <= 3 nodes found"),
        Err(e) => fail(e.to_string()),
    }
}

fn criterion_5() -> Outcome {
    let mut details = Vec::new();
    for variant in Variant::ALL {
        let params = p(2, 1, variant);
        let forms = enumerate_degree0(&params, DEFAULT_BUDGET).unwrap();
        let oracle = oracle_classify(&forms, &SearchSpace::new(params, 5)).unwrap();
        let decided: Vec<bool> = forms.iter().map(|f| is_satisfiable(f, &params).unwrap().satisfiable).collect();
        if oracle != decided {
            let bad: Vec<String> =
                forms.iter().zip(oracle.iter().zip(&decided)).filter(|(_, (a, b))| a != b).map(|(f, _)| f.to_string()).collect();
            return fail(format!("{variant}: disagreement on {}", bad.join(", ")));
        }
        let count = decided.iter().filter(|&&b| b).count();
        if count != SATISFIABLE_DEGREE0_N2_M1 {
            return fail(format!("{variant}: {count} satisfiable, expected {SATISFIABLE_DEGREE0_N2_M1}"));
        }
        details.push(format!("{variant} {count}/32"));
    }
    ok(format!("oracle (max_nodes 5) and witnesses agree: {}", details.join(", ")))
}

fn truth_table(t: &Term, n: usize, mask: u64) -> bool {
    match t {
        Term::Zero => false,
        Term::One => true,
        Term::Diag(i, j) => mask >> (i * n + j) & 1 == 1,
        Term::Var(l) => mask >> (n * n + l) & 1 == 1,
        Term::Neg(a) => !truth_table(a, n, mask),
        Term::And(a, b) => truth_table(a, n, mask) && truth_table(b, n, mask),
        Term::Or(a, b) => truth_table(a, n, mask) || truth_table(b, n, mask),
        Term::Cyl(..) => unreachable!("depth-0 terms only"),
    }
}

fn criterion_6() -> Outcome {
    let mut rng = rng_from_seed(6);
    for round in 0..150 {
        let params = p(2, round % 3, Variant::Nca);
        let t = random_term(&params, 0, rng.random_range(0..10), &mut rng);
        let got = rewrite(&t, &params, DEFAULT_BUDGET).unwrap();
        let total = 1u64 << params.generator_count();
        let expected: BTreeSet<NormalForm> =
            (0..total).filter(|&mask| truth_table(&t, 2, mask)).map(|mask| NormalForm::atom(2, Color(mask))).collect();
        let got: BTreeSet<NormalForm> = got.iter().cloned().collect();
        if got != expected {
            return fail(format!("rewrite of `{t}` differs from its truth table"));
        }
    }
    ok("150 random depth-0 terms (m = 0..2) match their truth tables")
}

fn criterion_7() -> Outcome {
    let mut rng = rng_from_seed(7);
    let mut instances = 0;
    for round in 0..600 {
        let n = if round % 4 == 3 { 3 } else { 2 };
        let params = p(n, 2, Variant::Nca);
        let size = rng.random_range(1..=4);
        let s = random_perturbed_structure(n, size, &mut rng);
        let e = random_valuation(2, size, &mut rng);
        let t = random_term(&params, 2, rng.random_range(0..8), &mut rng);
        let direct = s.evaluate(&t, &e);
        let mut pf = PointForms::new(&s, &e);
        for v in 0..size {
            let via_form = eval_on_form(&t, &pf.form(v, t.depth())).unwrap();
            instances += 1;
            if via_form != direct[v] {
                return fail(format!("`{t}` at node {v}: direct {}, via form {via_form}", direct[v]));
            }
        }
    }
    ok(format!("{instances} (structure, valuation, node, term) instances agree"))
}

fn criterion_8() -> Outcome {
    let mut verified = 0;
    for variant in Variant::ALL {
        let params = p(2, 1, variant);
        let mut taus = satisfiable_below_t_degree0(&params).unwrap();
        let degree0 = taus.len();
        let sampled = sample_below_t(&params, 1, 20, 8).unwrap();
        if sampled.len() < 20 {
            return fail(format!("{variant}: only {} degree-1 forms below t sampled", sampled.len()));
        }
        taus.extend(sampled);
        for tau in &taus {
            match split_atom(tau, &params) {
                Ok(r) => {
                    let descent_ok = r.sigma != r.gamma && below_t(&r.sigma);
                    if !descent_ok {
                        return fail(format!("{variant}: bad split of {tau}"));
                    }
                    verified += 1;
                }
                Err(e) => return fail(format!("{variant}: split of {tau} failed: {e}")),
            }
        }
        if degree0 == 0 {
            return fail(format!("{variant}: no satisfiable degree-0 form below t"));
        }
        let mut tau = taus[0].clone();
        for depth in 1..=3 {
            match split_atom(&tau, &params) {
                Ok(r) => tau = r.sigma,
                Err(e) => return fail(format!("{variant}: re-splitting failed at depth {depth}: {e}")),
            }
        }
    }
    ok(format!("{verified}/{verified} splits verified; re-splitting reached depth 3 for both variants"))
}

fn criterion_9() -> Outcome {
    let params = p(3, 1, Variant::Nca);
    let mut exercised = 0;
    for f in enumerate_degree0(&params, DEFAULT_BUDGET).unwrap() {
        if below_t(&f) {
            continue;
        }
        let r = is_satisfiable(&f, &params).unwrap();
        if !r.satisfiable || r.witness.rep_nodes().count() == 0 {
            continue;
        }
        if !r.conditions.condition(Condition::AS3).is_some_and(|c| c.passed()) {
            return fail(format!("AS3 fails on the witness of {f}"));
        }
        exercised += 1;
    }
    if exercised >= 10 {
        ok(format!("{exercised} satisfiable forms with nonempty Rep-part, AS3 passes on all"))
    } else {
        fail(format!("only {exercised} forms exercised the Rep-part"))
    }
}

fn criterion_10() -> Outcome {
    let params = p(2, 1, Variant::Nca);
    let t = Term::cyl(0, Term::var(0));
    let lib = match rewrite(&t, &params, DEFAULT_BUDGET) {
        Err(e @ Error::FormBudget { .. }) if e.to_string().contains("|F_1| = 2^5·2^64") => e.to_string(),
        other => return fail(format!("library returned {other:?}")),
    };
    let out = Command::new(env!("CARGO_BIN_EXE_cylindric"))
        .args(["rewrite", "--n", "2", "--m", "1", "c 0 ( x 0 )"])
        .output()
        .expect("binary runs");
    let stderr = String::from_utf8_lossy(&out.stderr);
    if out.status.code() == Some(2) && stderr.contains("2^5·2^64") {
        ok(format!("exit 2: {lib}"))
    } else {
        fail(format!("cli exit {:?}, stderr {stderr}", out.status.code()))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("degree-0 enumeration count", 1, criterion_1),
        ("partition of unity", 30, criterion_2),
        ("frame/axiom equivalence", 120, criterion_3),
        ("non-commutativity certificate", 60, criterion_4),
        ("decision procedure agrees with oracle", 120, criterion_5),
        ("rewriter soundness at degree 0", 30, criterion_6),
        ("frame-consistency law", 120, criterion_7),
        ("non-atomicity below t", 300, criterion_8),
        ("NCA Rep-part exercise", 120, criterion_9),
        ("budget guard", 1, criterion_10),
    ];
    let mut failures = 0;
    for (idx, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let passed = outcome.passed && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} [{}] {name}: {} ({:.2?} of {limit}s){}",
            idx + 1,
            if passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed,
            if in_time { "" } else { " time limit exceeded" },
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
