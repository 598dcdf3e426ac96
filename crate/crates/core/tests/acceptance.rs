//! End-to-end acceptance checks, one PASS/FAIL line each.
//! Runs without the libtest harness so the lines are always shown.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use repzeta::io::zeta_from_latex;
use repzeta::oracle::{compare_with_formula, Comparison, RingChoice, DEFAULT_MAX_ORDER};
use repzeta::{
    family_zeta, g_zeta, gl_zeta, order_poly, DimensionMultiset, FamilyId, RationalPoly, ZetaPoly,
};

const GL2_DISPLAY: &str = r"(q-1)\mathcal{D}+\frac 12 q(q-1)\mathcal{D}^{q-1}+(q-1)\mathcal{D}^q
    +\frac 12(q-1)(q-2)\mathcal{D}^{q+1}";

const G32_DISPLAY: &str = r"q(q-1)^2\mathcal{D}+\frac 12 q^2(q-1)^2\mathcal{D}^{q-1}
    +q(q-1)^2\mathcal{D}^q\\&\quad+\frac 12 q(q-1)^2(q-2)\mathcal{D}^{q+1}
    +2q(q-1)^2\mathcal{D}^{(q-1)(q+1)}\\&\quad+q(q-1)^3\mathcal{D}^{q^2}
    +q(q-1)(q+2)\mathcal{D}^{(q-1)^2(q+1)}\\&\quad+\frac 12 q^2(q-1)^3\mathcal{D}^{q^2(q-1)}
    +q(q-1)^3\mathcal{D}^{q(q-1)(q+1)}\\&\quad+q(q-1)^3\mathcal{D}^{q^3}
    +\frac 12 q(q-1)^3(q-2)\mathcal{D}^{q^2(q+1)}.";

type Outcome = Result<(), String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every family and parameter covered by the symbolic criteria.
fn symbolic_families() -> Vec<FamilyId> {
    let mut fs = Vec::new();
    for n in 1..=6 {
        fs.push(FamilyId::P { n });
        fs.push(FamilyId::Gl { n });
    }
    for n in 2..=6 {
        fs.push(FamilyId::T { n });
    }
    for n in 2..=5 {
        fs.push(FamilyId::Sd { n });
        for ell in 2..=6 {
            fs.push(FamilyId::G { ell, n });
        }
    }
    fs
}

fn gl2_vector() -> Outcome {
    let expected = zeta_from_latex(GL2_DISPLAY).map_err(|e| e.to_string())?;
    check(expected.len() == 4 && gl_zeta(2) == expected, || {
        format!("gl_zeta(2) = {} differs from {expected}", gl_zeta(2))
    })
}

fn main_example() -> Outcome {
    let expected = zeta_from_latex(G32_DISPLAY).map_err(|e| e.to_string())?;
    let got = g_zeta(3, 2).map_err(|e| e.to_string())?;
    check(expected.len() == 11 && got == expected, || {
        format!("g_zeta(3,2) = {got}\nexpected {expected}")
    })
}

fn term_count() -> Outcome {
    let z = g_zeta(2, 3).map_err(|e| e.to_string())?;
    check(
        z.len() == 24 && z.max_dimension_degree().unwrap_or(0) <= 6,
        || {
            format!(
                "{} terms, max degree {:?}",
                z.len(),
                z.max_dimension_degree()
            )
        },
    )
}

fn moments() -> Outcome {
    for f in symbolic_families() {
        let z = family_zeta(f).map_err(|e| e.to_string())?;
        let order = order_poly(f).map_err(|e| e.to_string())?;
        check(z.second_moment() == order, || {
            format!("{f}: second moment {} != order {order}", z.second_moment())
        })?;
    }
    Ok(())
}

fn ell_scaling() -> Outcome {
    let q = RationalPoly::q();
    for n in [2, 3] {
        for ell in 2..=5 {
            let lo = g_zeta(ell, n).map_err(|e| e.to_string())?;
            let hi = g_zeta(ell + 1, n).map_err(|e| e.to_string())?;
            check(hi == lo.scale(&q), || format!("l={ell}, n={n}"))?;
        }
    }
    Ok(())
}

fn integrality() -> Outcome {
    for f in symbolic_families() {
        let z: ZetaPoly = family_zeta(f).map_err(|e| e.to_string())?;
        for q in [2, 3, 4, 5, 7, 8, 9] {
            z.eval(&BigInt::from(q))
                .map_err(|e| format!("{f} at q={q}: {e}"))?;
        }
    }
    Ok(())
}

fn oracle_cases() -> Vec<(FamilyId, u32)> {
    use FamilyId::*;
    vec![
        (Gl { n: 2 }, 2),
        (Gl { n: 2 }, 3),
        (Gl { n: 3 }, 2),
        (P { n: 2 }, 2),
        (P { n: 2 }, 3),
        (P { n: 3 }, 2),
        (T { n: 2 }, 2),
        (T { n: 2 }, 3),
        (T { n: 3 }, 2),
        (T { n: 3 }, 3),
        (Sd { n: 2 }, 2),
        (G { ell: 2, n: 2 }, 2),
        (G { ell: 2, n: 2 }, 3),
        (G { ell: 3, n: 2 }, 2),
    ]
}

fn run_oracle() -> Result<BTreeMap<(FamilyId, u32), Comparison>, String> {
    let mut out = BTreeMap::new();
    for (f, p) in oracle_cases() {
        let c = compare_with_formula(f, p, RingChoice::Both, DEFAULT_MAX_ORDER)
            .map_err(|e| format!("{f} at p={p}: {e}"))?;
        out.insert((f, p), c);
    }
    Ok(out)
}

fn oracle_equivalence(runs: &BTreeMap<(FamilyId, u32), Comparison>) -> Outcome {
    for ((f, p), c) in runs {
        for r in &c.reports {
            check(r.is_match(), || {
                format!(
                    "{r}: oracle {:?} formula {:?} order {}/{} classes {}/{}",
                    r.degrees,
                    r.formula_degrees,
                    r.order,
                    r.expected_order,
                    r.classes,
                    r.expected_classes
                )
            })?;
        }
        check(!c.reports.is_empty(), || format!("{f} at p={p}: no runs"))?;
    }
    Ok(())
}

fn ring_independence(runs: &BTreeMap<(FamilyId, u32), Comparison>) -> Outcome {
    for (ell, n, p) in [(2, 2, 2), (2, 2, 3), (3, 2, 2)] {
        let c = &runs[&(FamilyId::G { ell, n }, p)];
        check(c.reports.len() == 2 && c.rings_agree == Some(true), || {
            let ds: Vec<_> = c
                .reports
                .iter()
                .map(|r| format!("{:?}", r.degrees))
                .collect();
            format!("(l,n,p)=({ell},{n},{p}): {}", ds.join(" vs "))
        })?;
    }
    Ok(())
}

fn evaluation_vector(runs: &BTreeMap<(FamilyId, u32), Comparison>) -> Outcome {
    let expected: DimensionMultiset = [(1u32, 4u32), (2, 2), (3, 12), (4, 4), (6, 2), (8, 2)]
        .into_iter()
        .collect();
    let c = &runs[&(FamilyId::G { ell: 3, n: 2 }, 2)];
    for r in &c.reports {
        check(r.degrees == expected, || {
            format!("oracle {r}: {:?}", r.degrees)
        })?;
    }
    let z = g_zeta(3, 2).map_err(|e| e.to_string())?;
    let formula = z.eval(&BigInt::from(2)).map_err(|e| e.to_string())?;
    check(
        formula == expected && expected.sum_of_squares() == 384u32.into(),
        || format!("formula {formula:?}"),
    )
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |id: usize, name: &str, start: Instant, outcome: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {id} {name} ({secs:.2}s)"),
            Err(e) => {
                failures += 1;
                println!("FAIL {id} {name} ({secs:.2}s): {e}");
            }
        }
    };

    let t = Instant::now();
    report(1, "GL_2 zeta polynomial", t, gl2_vector());
    let t = Instant::now();
    report(2, "G_(3,1^2) zeta polynomial", t, main_example());
    let t = Instant::now();
    report(3, "G_(2,1^3) term count and degrees", t, term_count());
    let t = Instant::now();
    report(4, "second moment equals group order", t, moments());
    let t = Instant::now();
    report(5, "l-scaling", t, ell_scaling());
    let t = Instant::now();
    report(6, "integrality at prime powers", t, integrality());

    let t = Instant::now();
    let runs = run_oracle();
    let oracle_secs = t.elapsed();
    match runs {
        Ok(runs) => {
            report(
                7,
                "formula equals oracle degrees",
                t,
                oracle_equivalence(&runs),
            );
            let t = Instant::now() - oracle_secs;
            report(8, "ring independence", t, ring_independence(&runs));
            let t = Instant::now() - oracle_secs;
            report(9, "G_(3,1^2) at q=2 by oracle", t, evaluation_vector(&runs));
        }
        Err(e) => {
            for (id, name) in [
                (7, "formula equals oracle degrees"),
                (8, "ring independence"),
                (9, "G_(3,1^2) at q=2 by oracle"),
            ] {
                report(id, name, t, Err(e.clone()));
            }
        }
    }

    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
