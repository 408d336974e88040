//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seshadri_core::positivity::global_generation_rearranged;
use seshadri_core::{
    canonical_class, classify_negative_class, compute, enumerate_minus_curves, half_bound_certificate,
    integrality_check, degree_one_ample_classes, degree_one_chain, nef_sum_certificate, curve_multiple_globally_generated,
    sample_ample_bundles, Assumption, ConfigDocument, DivisorClass, ExistenceStatus, ExtendedClass, KnownClass,
    MinusKind, NegativeClassType, PointSpec, ScanBox, SeshadriResult, SeshadriValue, SurfaceConfig,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

const SEED: u64 = 1729;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(what()) }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seshadri"))
}

fn run_bin(args: &[&str], stdin: Option<&str>) -> Result<(i32, String), String> {
    let mut cmd = bin();
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().map_err(err)?;
    if let Some(text) = stdin {
        child.stdin.take().expect("piped").write_all(text.as_bytes()).map_err(err)?;
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().map_err(err)?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn point_specs(config: &SurfaceConfig) -> Vec<PointSpec> {
    let mut out = vec![PointSpec::GenericOnSurface, PointSpec::Custom { extra_classes: vec![] }];
    out.extend((1..=config.r).map(PointSpec::OnExceptional));
    if config.validate_point(&PointSpec::NodeOfConfigCurve).is_ok() {
        out.push(PointSpec::NodeOfConfigCurve);
    }
    out
}

fn nodal_cubic_node() -> Outcome {
    let config = SurfaceConfig::nodal_cubic(8).map_err(err)?;
    let l = -&canonical_class(8);
    let res = compute(&l, &config, &PointSpec::NodeOfConfigCurve, None).map_err(err)?;
    let witness = ExtendedClass::from_i64(3, &[1; 8], 2);
    ensure(res.exact, || format!("not exact: {}", res.to_json()))?;
    ensure(res.lower == SeshadriValue::rational(1, 2), || format!("value {}", res.lower))?;
    ensure(res.witness.as_ref() == Some(&witness), || format!("witness {:?}", res.witness))?;

    let doc = ConfigDocument::from_parts(&config, &PointSpec::NodeOfConfigCurve).to_json();
    let (code, out) = run_bin(&["seshadri", "compute", "--L", &l.to_string(), "--config", "-"], Some(&doc))?;
    ensure(code == 0, || format!("cli exit {code}"))?;
    let cli: SeshadriResult = serde_json::from_str(&out).map_err(err)?;
    ensure(cli == res, || format!("cli disagrees: {out}"))?;
    Ok(format!("epsilon = {} with witness {witness}", res.lower))
}

fn degree_one_classification() -> Outcome {
    let found = degree_one_ample_classes(20).map_err(err)?;
    let expected = vec![DivisorClass::from_i64(3, &[1; 8])];
    ensure(found == expected, || format!("classes {found:?}"))?;
    degree_one_chain(1_000_000).map_err(|e| format!("chain fails at e = {e}"))?;
    // e^2 - 6e + 9 <= 0 only at e = 3, checked directly
    let roots: Vec<i64> = (1..=1_000_000i64).filter(|e| e * e - 6 * e + 9 <= 0).collect();
    ensure(roots == [3], || format!("roots {roots:?}"))?;
    Ok("e <= 20 gives only (3;1^8); chain holds to 10^6".into())
}

fn class_counts() -> Outcome {
    let minus1 = [1, 3, 6, 10, 16, 27, 56, 240];
    let minus2 = [0, 1, 4, 10, 20, 36, 63, 120];
    for n in 1..=8 {
        for (kind, oracle, want) in [
            (MinusKind::Minus1, common::minus1(n, 7), minus1[n - 1]),
            (MinusKind::Minus2, common::minus2(n, 7), minus2[n - 1]),
        ] {
            let got: BTreeSet<_> = enumerate_minus_curves(n, kind, None)
                .map_err(err)?
                .classes
                .iter()
                .map(|c| c.to_i64s().expect("small entries"))
                .collect();
            ensure(oracle.len() == want, || format!("oracle {kind} on {n} points: {}", oracle.len()))?;
            ensure(got == oracle, || format!("{kind} on {n} points: {} vs oracle {}", got.len(), oracle.len()))?;
        }
    }
    Ok("n = 1..8 match oracle; 240 and 120 on 8 points".into())
}

fn del_pezzo_at_least_one() -> Outcome {
    let one = SeshadriValue::integer(1);
    let mut checked = 0;
    for r in 1..=7 {
        let config = SurfaceConfig::del_pezzo_general(r).map_err(err)?;
        for l in sample_ample_bundles(&config, 100, SEED + r as u64).map_err(err)? {
            for x in point_specs(&config) {
                let res = compute(&l, &config, &x, None).map_err(err)?;
                ensure(res.lower >= one, || format!("{l} at {x:?}: {}", res.to_json()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} results, all >= 1"))
}

fn x8_below_one() -> Outcome {
    let half = SeshadriValue::rational(1, 2);
    let one = SeshadriValue::integer(1);
    let minus_k = -&canonical_class(8);
    let (mut checked, mut below) = (0, 0);
    for config in [SurfaceConfig::del_pezzo_general(8).map_err(err)?, SurfaceConfig::nodal_cubic(8).map_err(err)?] {
        let mut bundles = vec![minus_k.clone()];
        bundles.extend(sample_ample_bundles(&config, 100, SEED + 8).map_err(err)?);
        for l in &bundles {
            for x in point_specs(&config) {
                let res = compute(l, &config, &x, None).map_err(err)?;
                checked += 1;
                if res.upper < one {
                    below += 1;
                    let t2 = res.witness.as_ref().is_some_and(|w| w.t == BigInt::from(2));
                    ensure(*l == minus_k && res.upper == half && t2, || format!("{l} at {x:?}: {}", res.to_json()))?;
                }
            }
        }
    }
    ensure(below > 0, || "no value below 1 was seen".into())?;
    Ok(format!("{checked} results, {below} below 1, all -K with value 1/2"))
}

fn cubic_surface_node() -> Outcome {
    let config = SurfaceConfig::del_pezzo_general(6).map_err(err)?;
    let l = -&canonical_class(6);
    let nodal = l.extend(2);
    let x = PointSpec::Custom { extra_classes: vec![KnownClass { class: nodal.clone(), status: ExistenceStatus::Exists }] };
    let res = compute(&l, &config, &x, None).map_err(err)?;
    ensure(res.exact && res.upper == SeshadriValue::rational(3, 2), || res.to_json())?;
    ensure(res.witness.as_ref().is_some_and(|w| w.t == BigInt::from(2)), || res.to_json())?;
    Ok("exact 3/2, conditional on the registered nodal cubic through x".into())
}

fn integrality() -> Outcome {
    let mut checked = 0;
    for r in 1..=5 {
        let report = integrality_check(r).map_err(err)?;
        ensure(report.passed(), || format!("r = {r}: {report:?}"))?;
        let config = SurfaceConfig::del_pezzo_general(r).map_err(err)?;
        for l in sample_ample_bundles(&config, 50, SEED + r as u64).map_err(err)? {
            for x in point_specs(&config) {
                let res = compute(&l, &config, &x, None).map_err(err)?;
                ensure(res.exact && res.lower.is_integer(), || format!("{l} at {x:?}: {}", res.to_json()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("r = 1..5 certified; {checked} exact integer values"))
}

fn b2(n: i64) -> i64 {
    if n < 2 { 0 } else { n * (n - 1) / 2 }
}

/// Non-increasing `len`-tuples with entries in `0..=max`.
fn shapes(len: usize, max: i64) -> Vec<Vec<i64>> {
    fn go(len: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in (0..=max).rev() {
            cur.push(v);
            go(len, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, max, &mut Vec::new(), &mut out);
    out
}

fn half_bound() -> Outcome {
    let scan_box = ScanBox { max_degree: 12, max_multiplicity: 4, max_t: 6 };
    let mut survivors = 0u64;
    let mut below_one = 0u64;
    for r in [9usize, 10] {
        let config = SurfaceConfig::very_general(r).with_assumptions([Assumption::StrongShgh]);
        let mut bundles = vec![DivisorClass::uniform(4, 1, r)];
        bundles.extend(sample_ample_bundles(&config, 10, SEED + r as u64).map_err(err)?);
        let mut sorted_bundles: Vec<(i64, Vec<i64>)> = bundles.iter().map(|l| l.to_i64s().expect("small")).collect();
        for (_, n) in &mut sorted_bundles {
            n.sort_unstable_by(|a, b| b.cmp(a));
        }

        let report = half_bound_certificate(r, scan_box, &bundles[0]).map_err(err)?;
        ensure(report.passed(), || format!("library scan r = {r}: {:?}", report.violations.first()))?;

        // independent replay: surviving shapes, worst arrangement against each bundle
        for m in shapes(r, 4) {
            for d in 1..=12i64 {
                for t in 1..=6i64 {
                    let sq = d * d - m.iter().map(|v| v * v).sum::<i64>() - t * t;
                    let kdot = -3 * d + m.iter().sum::<i64>() + t;
                    let pa = (sq + kdot) / 2 + 1;
                    let v = b2(d + 2) - m.iter().map(|x| b2(x + 1)).sum::<i64>();
                    if sq >= 0 || pa < 0 || v - (b2(t + 1) - 2).max(0) <= 0 {
                        continue;
                    }
                    survivors += 1;
                    let c = ExtendedClass::from_i64(d, &m, t);
                    let kind = classify_negative_class(&c).map_err(err)?;
                    ensure(kind != NegativeClassType::OutOfRange, || format!("{c} is outside the six types"))?;
                    for (e, n) in &sorted_bundles {
                        // rearrangement: descending against descending minimises L.C
                        let lc = d * e - m.iter().zip(n).map(|(a, b)| a * b).sum::<i64>();
                        if lc < t {
                            below_one += 1;
                            ensure(t == 2 && 2 * lc >= t, || format!("{c} against ({e}; {n:?}): L.C = {lc}"))?;
                        }
                    }
                }
            }
        }
    }
    if below_one == 0 {
        return Ok(format!("{survivors} surviving shapes in T1-T6; no sampled ratio below 1 occurs in the box"));
    }
    Ok(format!("{survivors} surviving shapes in T1-T6; {below_one} ratios below 1, all t = 2 and >= 1/2"))
}

fn identities() -> Outcome {
    let mut grid = 0u64;
    for e in 1..=8i64 {
        for n in 1..=8i64 {
            for d in 1..=8i64 {
                for r in 1..=70i64 {
                    let [be, bn, bd, br] = [e, n, d, r].map(BigInt::from);
                    let direct = (r * e + 3) * d > r * (r * n + 1);
                    let rearranged = r * (e * d - r * n) > r - 3 * d;
                    ensure(direct == rearranged, || format!("identity at e={e} n={n} d={d} r={r}"))?;
                    ensure(global_generation_rearranged(&be, &bn, &bd, &br) == direct, || format!("library at {e},{n},{d},{r}"))?;
                    if r > d * d && e * d - r * n >= 1 {
                        let gg = curve_multiple_globally_generated(&be, &bn, &bd, &br).map_err(err)?;
                        ensure(gg == direct, || format!("certificate at {e},{n},{d},{r}"))?;
                    }
                    grid += 1;
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..10_000 {
        let lc: i64 = rng.gen_range(1..=1_000);
        let t: i64 = rng.gen_range(1..=lc + 1);
        let certified = nef_sum_certificate(&BigInt::from(lc), &BigInt::from(t)).map_err(err)?;
        ensure(certified && 2 * lc - t >= 0, || format!("L.C = {lc}, t = {t}"))?;
    }

    let mut scaled = 0;
    for r in [0usize, 3, 6, 8] {
        let config = if r == 0 { SurfaceConfig::very_general(0) } else { SurfaceConfig::del_pezzo_general(r).map_err(err)? };
        for l in sample_ample_bundles(&config, 5, SEED).map_err(err)? {
            for x in point_specs(&config) {
                let base = compute(&l, &config, &x, None).map_err(err)?;
                for k in 2..=5i64 {
                    let k = BigInt::from(k);
                    let res = compute(&l.scaled(&k), &config, &x, None).map_err(err)?;
                    let ok = res.lower == base.lower.scaled(&k) && res.upper == base.upper.scaled(&k);
                    ensure(ok, || format!("{l} x {k} at {x:?}"))?;
                    scaled += 1;
                }
            }
        }
    }
    Ok(format!("{grid} grid points, 10^4 certificates, {scaled} scaled results"))
}

fn determinism() -> Outcome {
    let runs = [
        run_bin(&["reproduce", "--all"], None)?,
        run_bin(&["reproduce", "--all"], None)?,
        run_bin(&["--threads", "1", "reproduce", "--all"], None)?,
        run_bin(&["--threads", "8", "reproduce", "--all"], None)?,
    ];
    ensure(runs[0].0 == 0, || format!("reproduce --all exited {}:\n{}", runs[0].0, runs[0].1))?;
    for (i, run) in runs.iter().enumerate().skip(1) {
        ensure(run == &runs[0], || format!("run {i} differs"))?;
    }
    Ok(format!("4 runs byte-identical ({} bytes)", runs[0].1.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("nodal cubic node value", nodal_cubic_node, Some(Duration::from_secs(1))),
        ("degree-one classification on 8 points", degree_one_classification, Some(Duration::from_secs(10))),
        ("negative class counts", class_counts, Some(Duration::from_secs(5))),
        ("del Pezzo values at least one", del_pezzo_at_least_one, Some(Duration::from_secs(30))),
        ("values below one on 8 points", x8_below_one, None),
        ("cubic surface node", cubic_surface_node, None),
        ("integrality up to 5 points", integrality, None),
        ("half bound box scan", half_bound, Some(Duration::from_secs(120))),
        ("algebraic identities", identities, None),
        ("deterministic reproduction", determinism, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({took:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({took:.2?})", i + 1);
            }
        }
    }
    println!("{}/10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
