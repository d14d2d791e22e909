//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p weil-core --test acceptance`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use weil_core::alpha::{alpha_support, theorem_support, theorem_value};
use weil_core::decomposition::{DimPolynomial, QLambda};
use weil_core::group::GroupSpec;
use weil_core::numerics::{run_verification, NumericalModel, VerifyConfig, DEFAULT_MATRIX_CAP};
use weil_core::orbit::{canonicalize, closure_orbits, DEFAULT_ORBIT_CAP};
use weil_core::poset::{OrderIdeal, Partition, DEFAULT_IDEAL_CAP};
use weil_core::{Execution, Result};

/// Tolerances and budgets, as pinned by the criteria.
const WEYL_TOL: f64 = 1e-10;
const PRODUCT_TOL: f64 = 1e-9;
const PROJECTOR_TOL: f64 = 1e-8;
const TRACE_TOL: f64 = 1e-6;
const ALPHA_TOL: f64 = 1e-9;

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn q(parts: &[u32]) -> QLambda {
    QLambda::new(Partition::new(parts.to_vec()).unwrap(), DEFAULT_IDEAL_CAP, Execution::default()).unwrap()
}

fn spec(p: u64, parts: &[u32]) -> GroupSpec {
    GroupSpec::new(p, Partition::new(parts.to_vec()).unwrap()).unwrap()
}

/// `Σ c_i p^{e_i}` with `c_i = num/den`.
fn poly(terms: &[(i64, i64, i64)]) -> DimPolynomial {
    terms
        .iter()
        .map(|&(e, n, d)| DimPolynomial::monomial(BigRational::new(n.into(), d.into()), e))
        .sum()
}

fn p(e: i64) -> DimPolynomial {
    DimPolynomial::p_power(e)
}

fn c(n: i64, d: i64) -> DimPolynomial {
    DimPolynomial::constant(BigRational::new(n.into(), d.into()))
}

fn multiset(polys: Vec<DimPolynomial>) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for x in polys {
        *m.entry(format!("{x:?}")).or_insert(0) += 1;
    }
    m
}

fn dims(ql: &QLambda) -> Vec<DimPolynomial> {
    ql.elements().iter().map(|qe| ql.dim_irreducible(qe).unwrap()).collect()
}

fn budget(elapsed: Duration, limit: Duration) -> (bool, String) {
    (elapsed <= limit, format!("{:.2}s of {}s", elapsed.as_secs_f64(), limit.as_secs()))
}

/// Ladder of an `l × k` rectangle: `top(j)` for `j < ⌊k/2⌋`, twice each, then
/// the bottom pair (the zero entry dropped).
fn ladder(k: i64, top: impl Fn(i64) -> DimPolynomial, bottom: DimPolynomial) -> Vec<DimPolynomial> {
    let mut out = Vec::new();
    for j in 0..k / 2 {
        out.push(top(j));
        out.push(top(j));
    }
    out.push((&bottom + &c(1, 1)) * c(1, 2));
    if k % 2 == 1 {
        out.push((&bottom - &c(1, 1)) * c(1, 2));
    }
    out
}

fn criterion_1() -> Vec<Line> {
    let start = Instant::now();
    let half = |x: DimPolynomial| x * c(1, 2);
    let quarter = |x: DimPolynomial| x * c(1, 4);
    let plus1 = poly(&[(1, 1, 1), (0, 1, 1)]);
    let minus1 = poly(&[(1, 1, 1), (0, -1, 1)]);
    let cube_minus = poly(&[(3, 1, 1), (1, -1, 1)]);
    let expected: Vec<(&[u32], Vec<DimPolynomial>)> = vec![
        (
            &[3, 1],
            vec![
                half(p(4) - p(2)),
                half(p(4) - p(2)),
                quarter(&plus1 * &plus1),
                quarter(&minus1 * &minus1),
                quarter(p(2) - c(1, 1)),
                quarter(p(2) - c(1, 1)),
            ],
        ),
        (
            &[3, 2, 1],
            vec![
                half(p(6) - p(4)),
                half(p(6) - p(4)),
                half(p(4) - p(2)),
                half(p(4) - p(2)),
                quarter(&plus1 * &plus1),
                quarter(&minus1 * &minus1),
                quarter(p(2) - c(1, 1)),
                quarter(p(2) - c(1, 1)),
            ],
        ),
        (
            &[4, 2],
            vec![
                half(p(6) - p(4)),
                half(p(6) - p(4)),
                half(poly(&[(4, 1, 1), (2, -2, 1), (0, 1, 1)])),
                half(poly(&[(4, 1, 1), (2, -2, 1), (0, 1, 1)])),
                half(p(2) - c(1, 1)),
                half(p(2) - c(1, 1)),
                half(p(2) - c(1, 1)),
                half(p(2) - c(1, 1)),
                c(1, 1),
            ],
        ),
        (&[4, 3, 2, 1], {
            let mut v = Vec::new();
            for _ in 0..2 {
                v.push(half(p(10) - p(8)));
                v.push(half(p(8) - p(6)));
                v.push(half(poly(&[(6, 1, 1), (4, -2, 1), (2, 1, 1)])));
                v.push(half(p(4) - p(2)));
                v.push(quarter(&cube_minus * &plus1));
                v.push(quarter(&cube_minus * &minus1));
            }
            v.push(quarter(&plus1 * &plus1));
            v.push(quarter(&minus1 * &minus1));
            v.push(quarter(p(2) - c(1, 1)));
            v.push(quarter(p(2) - c(1, 1)));
            v
        }),
    ];
    let mut examples_ok = true;
    let mut notes = Vec::new();
    for (parts, want) in &expected {
        let ok = multiset(dims(&q(parts))) == multiset(want.clone());
        if !ok {
            notes.push(format!("{parts:?} differs"));
        }
        examples_ok &= ok;
    }

    // Rectangles, as printed and as the connected-dimension formula gives them.
    let mut printed_ok = true;
    let mut formula_ok = true;
    let mut printed_misses = Vec::new();
    for k in 1..=5i64 {
        for l in 1..=3i64 {
            let got = multiset(dims(&q(&vec![k as u32; l as usize])));
            let printed = ladder(k, |j| half(p(l * (k - 2 * j)) - p(l * (k - 2 * j) - 2)), p(k - 2 * (k / 2)));
            let formula = ladder(k, |j| half(p(l * (k - 2 * j)) - p(l * (k - 2 * j) - 2 * l)), p(l * (k - 2 * (k / 2))));
            if got != multiset(printed) {
                printed_ok = false;
                printed_misses.push(format!("({k}^{l})"));
            }
            formula_ok &= got == multiset(formula);
        }
    }
    let (fast, time) = budget(start.elapsed(), Duration::from_secs(1));
    let mut detail = format!(
        "examples (3,1),(3,2,1),(4,2),(4,3,2,1): {}; printed ladder p^(lk)(1-p^-2)/2 … (p^(k-2⌊k/2⌋)±1)/2: {}; {time}",
        if examples_ok { "match" } else { "MISMATCH" },
        if printed_ok { "match".into() } else { format!("mismatch at {}", printed_misses.join(" ")) },
    );
    if !notes.is_empty() {
        detail.push_str(&format!(" [{}]", notes.join("; ")));
    }
    vec![
        Line { id: "1", pass: examples_ok && printed_ok && fast, detail },
        Line {
            id: "1b",
            pass: formula_ok,
            detail: "rectangles k ≤ 5, l ≤ 3 against p^(l(k-2j))(1-p^(-2l))/2 … (p^(l(k-2⌊k/2⌋))±1)/2".into(),
        },
    ]
}

fn criterion_2() -> Line {
    let start = Instant::now();
    let parts = Partition::all_up_to(10);
    let bad: Vec<String> = parts
        .iter()
        .filter(|part| {
            let ql = QLambda::new((*part).clone(), DEFAULT_IDEAL_CAP, Execution::default()).unwrap();
            dims(&ql).into_iter().sum::<DimPolynomial>() != p(part.size() as i64)
        })
        .map(|part| part.to_string())
        .collect();
    let (fast, time) = budget(start.elapsed(), Duration::from_secs(30));
    Line {
        id: "2",
        pass: bad.is_empty() && fast,
        detail: format!("Σ dim = p^|λ| over {} partitions with |λ| ≤ 10, {} failures; {time}", parts.len(), bad.len()),
    }
}

fn criterion_3() -> Line {
    let start = Instant::now();
    let parts = Partition::all_up_to(10);
    let mut bad = Vec::new();
    for part in &parts {
        let ql = QLambda::new(part.clone(), DEFAULT_IDEAL_CAP, Execution::default()).unwrap();
        let counts = ql.len() == ql.ideals().len();
        let forward = ql.elements().iter().all(|qe| ql.psi(ql.theta(qe).unwrap()).ok().as_ref() == Some(qe));
        let backward = ql.ideals().iter().all(|&j| ql.psi(j).and_then(|x| ql.theta(&x)).ok() == Some(j));
        if !(counts && forward && backward) {
            bad.push(part.to_string());
        }
    }
    let (fast, time) = budget(start.elapsed(), Duration::from_secs(30));
    Line {
        id: "3",
        pass: bad.is_empty() && fast,
        detail: format!("|Q_λ| = |J(P_λ)| and Θ/Ψ mutually inverse over {} partitions, {} failures; {time}", parts.len(), bad.len()),
    }
}

fn criterion_4() -> Line {
    let parts = Partition::all_up_to(8);
    let mut checked = 0;
    let mut bad = Vec::new();
    for part in &parts {
        let ql = QLambda::new(part.clone(), DEFAULT_IDEAL_CAP, Execution::default()).unwrap();
        for qe in ql.elements() {
            checked += 1;
            if ql.dim_via_mobius(qe).unwrap() != ql.dim_irreducible(qe).unwrap() {
                bad.push(format!("{part} {qe:?}"));
            }
        }
    }
    Line {
        id: "4",
        pass: bad.is_empty(),
        detail: format!("Möbius-inverted subspace dimensions = closed form for {checked} elements, {} mismatches", bad.len()),
    }
}

fn criterion_5() -> Result<Line> {
    let start = Instant::now();
    let cases: [(u64, &[u32]); 9] =
        [(3, &[1]), (5, &[1]), (3, &[2]), (3, &[1, 1]), (3, &[2, 1]), (5, &[2]), (3, &[3]), (3, &[2, 2]), (3, &[3, 1])];
    let families: [(&str, &[&str], f64); 4] = [
        ("weyl", &["weyl_relation"], WEYL_TOL),
        ("product", &["product_lemma"], PRODUCT_TOL),
        (
            "projector",
            &["projector_hermitian", "projector_idempotent", "projector_orthogonal", "projector_completeness"],
            PROJECTOR_TOL,
        ),
        ("trace", &["projector_trace"], TRACE_TOL),
    ];
    let mut worst = [0.0f64; 4];
    let mut ok = true;
    let mut exhaustive = true;
    for (pr, parts) in cases {
        let report = run_verification(&spec(pr, parts), &q(parts), &VerifyConfig::default())?;
        for (f, (_, names, tol)) in families.iter().enumerate() {
            for name in *names {
                let check = report.check(name).expect("check present");
                worst[f] = worst[f].max(check.max_deviation);
                ok &= check.max_deviation <= *tol;
            }
        }
        exhaustive &= report.check("weyl_relation").unwrap().detail.starts_with("all");
    }
    let (fast, time) = budget(start.elapsed(), Duration::from_secs(120));
    let summary: Vec<String> =
        families.iter().zip(worst).map(|((name, _, tol), w)| format!("{name} {w:.1e} ≤ {tol:.0e}")).collect();
    Ok(Line {
        id: "5",
        pass: ok && fast && exhaustive,
        detail: format!("9 cases, Weyl relation over all pairs; {}; {time}", summary.join(", ")),
    })
}

fn criterion_6() -> Result<Vec<Line>> {
    let mut worst_closed: f64 = 0.0;
    let mut worst_expansion: f64 = 0.0;
    let mut support_closed = true;
    let mut support_expansion = true;
    let mut misses = Vec::new();
    for parts in [&[2u32][..], &[2, 1], &[3, 1]] {
        let g = spec(3, parts);
        let ql = q(parts);
        let model = NumericalModel::new(&g, &ql, DEFAULT_MATRIX_CAP, Execution::default())?;
        for qe in ql.elements() {
            let numeric = model.numerical_alpha(qe)?;
            let nonzero: Vec<OrderIdeal> =
                ql.ideals().iter().zip(&numeric.alpha).filter(|(_, x)| x.abs() > ALPHA_TOL).map(|(&l, _)| l).collect();
            let mut dev: f64 = 0.0;
            for (i, &l) in ql.ideals().iter().enumerate() {
                dev = dev.max((numeric.alpha[i] - theorem_value(&ql, qe, l)?.to_f64(3.0)).abs());
                let exact = weil_core::alpha::alpha_value(&ql, qe, l)?.to_f64(3.0);
                worst_expansion = worst_expansion.max((numeric.alpha[i] - exact).abs());
            }
            worst_closed = worst_closed.max(dev);
            let sc = theorem_support(&ql, qe)? == nonzero;
            support_closed &= sc;
            support_expansion &= alpha_support(&ql, qe)? == nonzero;
            if dev > ALPHA_TOL || !sc {
                misses.push(format!("{parts:?} I={:?} φ={:?}", ql.poset().members(qe.ideal.set()), qe.signs));
            }
        }
    }
    Ok(vec![
        Line {
            id: "6",
            pass: worst_closed <= ALPHA_TOL && support_closed,
            detail: format!(
                "closed form: max |Δα| = {worst_closed:.2e} (tol {ALPHA_TOL:.0e}), supports {}{}",
                if support_closed { "match" } else { "differ" },
                if misses.is_empty() { String::new() } else { format!("; fails at {}", misses.join(", ")) }
            ),
        },
        Line {
            id: "6b",
            pass: worst_expansion <= ALPHA_TOL && support_expansion,
            detail: format!(
                "merged expansion: max |Δα| = {worst_expansion:.2e}, supports {}",
                if support_expansion { "match" } else { "differ" }
            ),
        },
    ])
}

fn criterion_7() -> Result<Line> {
    let start = Instant::now();
    let mut ok = true;
    let mut counts = Vec::new();
    for (pr, parts) in [(3u64, &[1u32][..]), (3, &[2]), (3, &[1, 1]), (3, &[2, 1]), (5, &[1]), (5, &[2])] {
        let g = spec(pr, parts);
        let orbits = closure_orbits(&g, DEFAULT_ORBIT_CAP, Execution::default())?;
        let n = g.order().unwrap() as usize;
        let ideals = g.poset().enumerate_ideals(DEFAULT_IDEAL_CAP)?;
        ok &= orbits.len() == ideals.len();
        ok &= orbits.iter().map(|o| o.size).sum::<usize>() == n * n;
        ok &= orbits.iter().all(|o| o.members.iter().all(|&i| canonicalize(&g, &g.k_at(i)) == o.ideal));
        counts.push(orbits.len().to_string());
    }
    let (fast, time) = budget(start.elapsed(), Duration::from_secs(60));
    Ok(Line { id: "7", pass: ok && fast, detail: format!("orbit counts {} = |J(P_λ)|; {time}", counts.join(",")) })
}

fn criterion_8() -> Result<Line> {
    let mut checked = 0;
    let mut ok = true;
    for part in Partition::all_up_to(6) {
        let g = GroupSpec::new(3, part)?;
        for ideal in g.poset().enumerate_ideals(DEFAULT_IDEAL_CAP)? {
            checked += 1;
            ok &= g.dual_subgroup_check(ideal, u128::MAX)?;
        }
    }
    Ok(Line { id: "8", pass: ok, detail: format!("annihilator of A_I = A_(I^⊥) for {checked} ideals at p = 3") })
}

fn criterion_9(earlier: &[Line]) -> Line {
    let mut evaluated = 0;
    let mut ok = true;
    for part in Partition::all_up_to(10) {
        let ql = QLambda::new(part, DEFAULT_IDEAL_CAP, Execution::default()).unwrap();
        for d in dims(&ql) {
            for qv in [3, 5, 7, 9, 27] {
                evaluated += 1;
                let v = d.evaluate(&BigInt::from(qv));
                ok &= v.is_integer() && v > BigRational::from_integer(0.into());
            }
        }
    }
    let failed: Vec<&str> = earlier.iter().filter(|l| !l.pass && !l.id.ends_with('b')).map(|l| l.id).collect();
    Line {
        id: "9",
        pass: ok && failed.is_empty(),
        detail: format!(
            "{evaluated} evaluations at q ∈ {{3,5,7,9,27}}: {}; criteria 1–8: {}",
            if ok { "all positive integers" } else { "NOT all positive integers" },
            if failed.is_empty() { "all pass".into() } else { format!("{} failed", failed.join(",")) }
        ),
    }
}

fn main() {
    let mut lines = criterion_1();
    lines.push(criterion_2());
    lines.push(criterion_3());
    lines.push(criterion_4());
    lines.push(criterion_5().expect("criterion 5 runs"));
    lines.extend(criterion_6().expect("criterion 6 runs"));
    lines.push(criterion_7().expect("criterion 7 runs"));
    lines.push(criterion_8().expect("criterion 8 runs"));
    let nine = criterion_9(&lines);
    lines.push(nine);
    for l in &lines {
        println!("criterion {:<3} {}  {}", l.id, if l.pass { "PASS" } else { "FAIL" }, l.detail);
    }
    let failed = lines.iter().filter(|l| !l.pass).count();
    println!("{} of {} lines pass", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
