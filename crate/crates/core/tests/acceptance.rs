//! Acceptance checks. Run with `cargo test --test acceptance`; prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use monpres::classgroup::class_group;
use monpres::criteria::{is_normal, CanonicalOneRelator, FailedCondition, NormalityStatus};
use monpres::divisors::divisor_data_one_relator;
use monpres::embedding::embed_one_relator;
use monpres::linalg::{smith_normal_form, IntMatrix};
use monpres::oracle::congruence::{cancellativity_witness, congruence_classes};
use monpres::oracle::valuation::{facet_valuation_class_group, matched_rows, reconcile};
use monpres::presentation::{parse_presentation, Word};
use monpres::sweep::{one_relator_family, run_sweep, two_relator_family, CheckOptions, OracleSet, SweepRow};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sweep_failures(rows: &[SweepRow]) -> Result<(), String> {
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.check.agree() || !r.check.errors.is_empty())
        .map(|r| {
            format!(
                "  {} [{}]\n    disagreements: {:?}\n    errors: {:?}",
                r.presentation,
                r.instance.parameters(),
                r.check.disagreements,
                r.check.errors
            )
        })
        .collect();
    ensure(bad.is_empty(), || {
        format!("{} instance(s) failed:\n{}", bad.len(), bad.join("\n"))
    })
}

fn golden_verdicts() -> Outcome {
    let p = parse_presentation("u1 u2 u3 u4 u5 | u1 u2 = u3^2 ; u1 u3 = u4 u5").map_err(|e| e.to_string())?;
    let v = is_normal(&p);
    ensure(v.status == NormalityStatus::NormalPositive, || {
        format!("first example: {}", v.status)
    })?;
    let q = parse_presentation("u1 u2 u3 u4 | u1 u2 = u3^2 ; u1 u3 = u4^2").map_err(|e| e.to_string())?;
    let v = is_normal(&q);
    ensure(v.status == NormalityStatus::NotNormal, || {
        format!("second example: {}", v.status)
    })?;
    ensure(v.failed_condition == Some(FailedCondition::Overlap), || {
        format!("failed {:?}", v.failed_condition)
    })?;
    Ok("NormalPositive and NotNormal (3d)".into())
}

fn one_relator_sweep() -> Outcome {
    let instances: Vec<_> = one_relator_family(5, 3)
        .into_iter()
        .filter(|i| i.presentation().generator_count() >= 3)
        .collect();
    let opts = CheckOptions {
        oracles: OracleSet {
            cancel: false,
            normal: true,
            class: true,
        },
        injectivity_degree: Some(6),
        ..CheckOptions::default()
    };
    let rows = run_sweep(instances, &opts);
    sweep_failures(&rows)?;
    let normal = rows.iter().filter(|r| r.check.verdict.is_normal()).count();
    let uninjected = rows
        .iter()
        .filter(|r| r.check.verdict.is_normal() && r.check.injective != Some(true))
        .count();
    ensure(uninjected == 0, || {
        format!("{uninjected} normal instances without an injectivity check")
    })?;
    let unchecked = rows
        .iter()
        .filter(|r| r.check.verdict.is_normal() && r.check.facet_route.is_none())
        .count();
    ensure(unchecked == 0, || {
        format!("{unchecked} normal instances without facet valuations")
    })?;
    Ok(format!("{} instances, {normal} normal, all routes agree", rows.len()))
}

fn two_relator_sweep() -> Outcome {
    let opts = CheckOptions {
        oracles: OracleSet {
            cancel: false,
            normal: true,
            class: true,
        },
        injectivity_degree: Some(6),
        ..CheckOptions::default()
    };
    let rows = run_sweep(two_relator_family(7, 2), &opts);
    sweep_failures(&rows)?;
    let not_normal = rows.iter().filter(|r| !r.check.verdict.is_normal()).count();
    ensure(not_normal == 0, || {
        format!("{not_normal} canonical shapes judged not normal")
    })?;
    let uninjected = rows.iter().filter(|r| r.check.injective != Some(true)).count();
    ensure(uninjected == 0, || {
        format!("{uninjected} instances without an injectivity check")
    })?;
    let shapes: std::collections::BTreeSet<[usize; 5]> = rows
        .iter()
        .filter_map(|r| match &r.instance {
            monpres::sweep::Instance::Two(c) => Some(c.k),
            _ => None,
        })
        .collect();
    Ok(format!(
        "{} instances over {} block patterns, all routes agree",
        rows.len(),
        shapes.len()
    ))
}

fn quadric() -> Outcome {
    let p = parse_presentation("u1 u2 u3 | u1 u2 = u3^2").map_err(|e| e.to_string())?;
    let r = class_group(&p).map_err(|e| e.to_string())?;
    ensure(r.formula.to_string() == "Z/2" && r.agree, || {
        format!("formula {} matrix {}", r.formula, r.matrix_route)
    })?;
    let c = CanonicalOneRelator::standard(2, vec![2], 0);
    let d = divisor_data_one_relator(&c);
    let expected = vec![vec![2i64, 0, 1], vec![0, 2, 1]];
    ensure(d.matrix.to_i64_rows() == Some(expected.clone()), || {
        format!("divisor matrix {}", d.matrix)
    })?;
    let v = facet_valuation_class_group(&embed_one_relator(&c)).map_err(|e| e.to_string())?;
    ensure(v.class_group.to_string() == "Z/2", || {
        format!("facet valuations {}", v.class_group)
    })?;
    let matching = reconcile(&d, &c.relabel, &v).map_err(|e| e.to_string())?;
    let mut rows = matched_rows(&v, &matching);
    let mut want = expected;
    rows.sort();
    want.sort();
    ensure(rows == want, || format!("valuation rows {rows:?}"))?;
    Ok("Z/2 by formula, divisor matrix and facet valuations".into())
}

fn embedding_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..20 {
        let n = rng.gen_range(3..=5);
        let k = rng.gen_range(1..n);
        let a: Vec<u64> = (k..n).map(|_| rng.gen_range(1..=3)).collect();
        let c = CanonicalOneRelator::standard(k, a, 0);
        let p = c.presentation();
        ensure(is_normal(&p).is_normal(), || {
            format!("trial {trial}: {} not normal", p.to_inline())
        })?;
        let e = embed_one_relator(&c);
        let r = &p.relations()[0];
        let (l, rr) = (e.image_of(&r.lhs.to_dense(n)), e.image_of(&r.rhs.to_dense(n)));
        ensure(l == rr, || format!("trial {trial}: images {l:?} and {rr:?} differ"))?;
        let classes = congruence_classes(&p, 6).map_err(|e| e.to_string())?;
        let mut images: Vec<Vec<i128>> = classes.classes.iter().map(|c| e.image_of(&c[0])).collect();
        images.sort();
        let before = images.len();
        images.dedup();
        ensure(images.len() == before, || {
            format!("trial {trial}: {} has colliding classes", p.to_inline())
        })?;
    }
    Ok("20 random instances satisfy the relation and inject up to degree 6".into())
}

/// Invariant factors from gcds of minors: `d_k = D_k / D_{k-1}`.
fn determinantal_divisors(a: &IntMatrix) -> Vec<BigInt> {
    fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        if n < k {
            return Vec::new();
        }
        let mut out = choose(n - 1, k);
        for mut s in choose(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=a.rows().min(a.cols()) {
        let mut g = BigInt::zero();
        for rs in choose(a.rows(), k) {
            for cs in choose(a.cols(), k) {
                let rows: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| a.get(i, j).clone()).collect())
                    .collect();
                g = g.gcd(&IntMatrix::from_rows(k, &rows).determinant());
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn snf_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..500 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-20..=20)).collect())
            .collect();
        let a = IntMatrix::from_rows(cols, &data);
        let s = smith_normal_form(&a);
        ensure(&(&s.u * &a) * &s.v == s.d, || {
            format!("trial {trial}: U A V != D for {a}")
        })?;
        ensure(
            s.u.determinant().abs().is_one() && s.v.determinant().abs().is_one(),
            || format!("trial {trial}: transforms not unimodular"),
        )?;
        let f = s.invariant_factors();
        ensure(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()), || {
            format!("trial {trial}: chain {f:?}")
        })?;
        let naive = determinantal_divisors(&a);
        ensure(f == naive, || {
            format!("trial {trial}: {f:?} but minors give {naive:?} for {a}")
        })?;
    }
    Ok("500 random matrices".into())
}

fn cancellativity() -> Outcome {
    let p = parse_presentation("a b | a^2 = a b").map_err(|e| e.to_string())?;
    let w = cancellativity_witness(&p, 2)
        .map_err(|e| e.to_string())?
        .ok_or("no witness for a^2 = a b")?;
    ensure(
        (w.generator, &w.x, &w.y) == (0, &Word::generator(0), &Word::generator(1)),
        || format!("unexpected witness {}", w.render(p.generators())),
    )?;
    let opts = CheckOptions {
        oracles: OracleSet {
            cancel: true,
            normal: false,
            class: false,
        },
        degree_bound: 8,
        injectivity_degree: None,
    };
    let mut instances = one_relator_family(5, 3);
    instances.extend(two_relator_family(7, 2));
    let rows = run_sweep(instances, &opts);
    sweep_failures(&rows)?;
    let checked = rows.iter().filter(|r| r.check.verdict.is_normal()).count();
    Ok(format!(
        "witness (a, a, b); no witness up to degree 8 on {checked} normal instances"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("golden verdicts", golden_verdicts, Duration::from_secs(1)),
        ("one-relator sweep", one_relator_sweep, Duration::from_secs(300)),
        ("two-relator sweep", two_relator_sweep, Duration::from_secs(900)),
        ("quadric cone", quadric, Duration::from_secs(1)),
        ("embedding suite", embedding_suite, Duration::from_secs(120)),
        ("smith normal form suite", snf_suite, Duration::from_secs(60)),
        ("cancellativity oracle", cancellativity, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > *limit => Err(format!("{msg}, but took {elapsed:.2?} (limit {limit:?})")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {} {name}: {msg} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
