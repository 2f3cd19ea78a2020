//! Acceptance criteria 1–12. Each test writes one `criterion N: PASS|FAIL`
//! line straight to stdout so it shows up even when output is captured.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spreadpack::bounds::{self, bound_cor34, bound_thm33, upper_bound, DEFAULT_SEMILINEAR_CAP};
use spreadpack::certificate::certify_bytes;
use spreadpack::num_bigint::BigInt;
use spreadpack::num_rational::BigRational;
use spreadpack::oracles::{
    check_intersections, check_lemma24, count_subspaces_brute, gl_stream_count, scalar_memberships, tower_for,
    DEFAULT_ORACLE_CAP,
};
use spreadpack::search::{greedy_construct, is_independent, union_size_exact, GeneratingSet, SearchConfig};
use spreadpack::spread::{certify_spread, desarguesian_spread, spread_image};

const BUDGET: u128 = 1 << 26;

fn report(criterion: u32, ok: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let within = elapsed <= limit;
    let status = if ok && within { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "criterion {criterion}: {status} ({:.1} s, limit {} s) {detail}",
        elapsed.as_secs_f64(),
        limit.as_secs()
    )
    .unwrap();
    out.flush().unwrap();
    assert!(ok, "criterion {criterion}: {detail}");
    assert!(within, "criterion {criterion} took {elapsed:?}, limit {limit:?}");
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_spreadpack")
}

#[test]
fn criterion_01_gaussian_binomials() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut checked = 0;
    for q in [2u64, 3] {
        for n in 0..=5 {
            for k in 0..=n {
                let brute = count_subspaces_brute(n, k, q, DEFAULT_ORACLE_CAP).unwrap();
                let formula = bounds::gaussian_binomial(n, k, q).unwrap();
                checked += 1;
                if formula != brute.into() {
                    bad.push(format!("[{n},{k}]_{q}"));
                }
            }
        }
    }
    let g422 = count_subspaces_brute(4, 2, 2, DEFAULT_ORACLE_CAP).unwrap();
    let ok = bad.is_empty() && g422 == 35;
    report(1, ok, t.elapsed(), Duration::from_secs(10), &format!("{checked} coefficients, [4,2]_2 = {g422}, mismatches {bad:?}"));
}

#[test]
fn criterion_02_gl_order() {
    let t = Instant::now();
    let cases = [(2usize, 2u64, 6u128), (2, 3, 48), (3, 2, 168), (4, 2, 20160)];
    let mut detail = Vec::new();
    let mut ok = true;
    for (n, q, expected) in cases {
        let streamed = gl_stream_count(n, q, BUDGET).unwrap();
        let product = bounds::gl_order(n, q);
        ok &= streamed == expected && product == expected.into();
        detail.push(format!("GL({n},{q}) = {streamed}"));
    }
    report(2, ok, t.elapsed(), Duration::from_secs(10), &detail.join(", "));
}

#[test]
fn criterion_03_transporter_counts() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, k, q) in [(2usize, 1usize, 2u64), (2, 1, 3), (3, 1, 2), (4, 2, 2)] {
        let reports = check_lemma24(n, k, q, 3, 0xacc3, 2, BUDGET).unwrap();
        // q^{k(n−k)}·|GL(k,q)|·|GL(n−k,q)| from the raw products
        let gl = |d: usize| (0..d).map(|i| q.pow(d as u32) - q.pow(i as u32)).product::<u64>();
        let formula = q.pow((k * (n - k)) as u32) * gl(k) * gl(n - k);
        ok &= reports.len() >= 3
            && reports.iter().all(|r| r.matched && r.enumerated == BigRational::from_integer(formula.into()));
        detail.push(format!("({n},{k},{q}) → {formula} x{}", reports.len()));
    }
    report(3, ok, t.elapsed(), Duration::from_secs(60), &detail.join(", "));
}

#[test]
fn criterion_04_spread_images() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, k) in [(4usize, 2usize), (6, 2)] {
        let tower = tower_for(n, k, 2).unwrap();
        let f = tower.scalars();
        let base = desarguesian_spread(&tower);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let passed = (0..1000)
            .filter(|_| {
                let m = spreadpack::linalg::random_gl_with(n, f, &mut rng);
                let s = spread_image(&m, &base, f).unwrap();
                certify_spread(s.members(), s.ambient(), f).is_ok()
            })
            .count();
        ok &= passed == 1000;
        detail.push(format!("({n},{k},2) {passed}/1000"));
    }
    report(4, ok, t.elapsed(), Duration::from_secs(30), &detail.join(", "));
}

#[test]
fn criterion_05_intersection_terms() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (q, pair, triple) in [(2u64, 36u32, 6u32), (3, 2304, 48)] {
        let tower = tower_for(4, 2, q).unwrap();
        let reports = check_intersections(&tower, 5, 0x5eed, 4, BUDGET).unwrap();
        let pairs: Vec<_> = reports.iter().filter(|r| r.claim == "pair-intersection").collect();
        let triples: Vec<_> = reports.iter().filter(|r| r.claim == "triple-intersection").collect();
        ok &= pairs.len() >= 10 && triples.len() >= 10;
        ok &= pairs.iter().all(|r| r.enumerated == BigRational::from_integer(pair.into()));
        ok &= triples.iter().all(|r| r.enumerated == BigRational::from_integer(triple.into()));
        ok &= reports.iter().all(|r| r.matched);
        detail.push(format!("(4,2,{q}) pairs {} x{}, triples {} x{}", pair, pairs.len(), triple, triples.len()));
    }
    report(5, ok, t.elapsed(), Duration::from_secs(300), &detail.join(", "));
}

#[test]
fn criterion_06_thm33_values() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (q, expected, gl4) in [(2u64, rat(336, 239), None), (3, rat(24261120, 18661680), Some(24261120u128))] {
        let (n, k) = (4usize, 2usize);
        let streamed = |d: usize| gl_stream_count(d, q, BUDGET).unwrap();
        let gl_n = gl4.unwrap_or_else(|| streamed(n));
        let big_n = (q.pow(n as u32) - 1) as u128 / (q.pow(k as u32) - 1) as u128;
        let qn1 = (q.pow(n as u32) - 1) as u128;
        let qk1 = (q.pow(k as u32) - 1) as u128;
        let transport = big_n * big_n * (q as u128).pow((k * (n - k)) as u32) * streamed(k) * streamed(n - k);
        let denom = transport - qn1 * qn1 / qk1 + qn1;
        let recomputed = BigRational::new(BigInt::from(gl_n), BigInt::from(denom));
        let r = bound_thm33(n, k, q).unwrap();
        ok &= r.value == expected && r.value == recomputed && r.integer_bound == BigInt::from(2) && !r.strict;
        ok &= bounds::gl_order(n, q) == gl_n.into();
        detail.push(format!("(4,2,{q}) = {} → {}", r.value, r.integer_bound));
    }
    report(6, ok, t.elapsed(), Duration::from_secs(60), &detail.join(", "));
}

#[test]
fn criterion_07_cor34_values_and_ordering() {
    let t = Instant::now();
    let cases = [((4usize, 2usize), rat(7, 5), 2), ((6, 2), rat(31, 21), 2), ((6, 3), rat(1085, 63), 18)];
    let mut ok = true;
    let mut detail = Vec::new();
    for ((n, k), value, int) in cases {
        let r = bound_cor34(n, k, 2).unwrap();
        ok &= r.value == value && r.integer_bound == BigInt::from(int) && r.strict;
        detail.push(format!("({n},{k},2) = {} → {}", r.value, r.integer_bound));
    }
    let mut ordered = 0;
    for q in [2u64, 3] {
        for n in 2..=8 {
            for k in (1..n).filter(|k| n % k == 0) {
                let c = bound_cor34(n, k, q).unwrap().value;
                let th = bound_thm33(n, k, q).unwrap().value;
                let u = upper_bound(n, k, q).unwrap().value;
                ok &= c < th && th <= u;
                ordered += 1;
            }
        }
    }
    detail.push(format!("ordering on {ordered} instances"));
    report(7, ok, t.elapsed(), Duration::from_secs(10), &detail.join(", "));
}

#[test]
fn criterion_08_greedy_realizes_guarantee() {
    let t = Instant::now();
    let tower = tower_for(4, 2, 2).unwrap();
    let f = tower.scalars();
    let stats = union_size_exact(&tower, 1, BUDGET).unwrap();
    let cfg = SearchConfig { early_exit: false, ..SearchConfig::default() };
    let out = greedy_construct(&cfg, &tower).unwrap();
    let guarantee = stats.gl_order.div_ceil(stats.union_size);
    let certified = out.parallelism.certify(f).is_ok();
    let gs = GeneratingSet::desarguesian(&tower);
    let independent = is_independent(&out.parallelism.generators, &gs, f).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let symmetric = (0..1000).all(|_| gs.symmetric_at(&spreadpack::linalg::random_gl_with(4, f, &mut rng)).unwrap());
    let ok = certified
        && independent
        && symmetric
        && stats.gl_order == 20160
        && stats.degree == stats.union_size - 1
        && out.accepted() as u128 >= guarantee
        && guarantee >= 2;
    report(
        8,
        ok,
        t.elapsed(),
        Duration::from_secs(120),
        &format!(
            "union_size {} degree {} guarantee {} accepted {} symmetric(1000) {symmetric}",
            stats.union_size,
            stats.degree,
            guarantee,
            out.accepted()
        ),
    );
}

#[test]
fn criterion_09_thm32_diagnostic() {
    let t = Instant::now();
    let r = bounds::bound_thm32_l(2, 2, DEFAULT_SEMILINEAR_CAP).unwrap();
    let l = bounds::thm32_l_value(&r).unwrap().clone();
    let stats = union_size_exact(&tower_for(4, 2, 2).unwrap(), 1, BUDGET).unwrap();
    let enumerated = BigRational::from_integer(stats.union_size.into());
    let agree = l == enumerated;
    let mut lines: Vec<String> = r.terms.iter().map(|t| format!("{} = {}", t.label, t.value)).collect();
    lines.push(format!("enumerated union = {}", stats.union_size));
    lines.push(format!("status = {}", if agree { "agree" } else { "MISMATCH" }));
    lines.extend(r.flags.iter().map(|f| format!("flag = {f}")));
    let archive = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("thm32_comparison.txt");
    std::fs::write(&archive, lines.join("\n") + "\n").unwrap();
    if !agree {
        writeln!(std::io::stderr(), "MISMATCH: printed L = {l}, enumerated union = {}", stats.union_size).unwrap();
    }
    // the comparison itself is the deliverable; a mismatch is flagged above, not failed
    report(
        9,
        archive.exists(),
        t.elapsed(),
        Duration::from_secs(120),
        &format!("L = {l} vs union {} ({}), archived to {}", stats.union_size, if agree { "agree" } else { "MISMATCH" }, archive.display()),
    );
}

#[test]
fn criterion_10_scalar_overcount() {
    let t = Instant::now();
    let tower = tower_for(4, 2, 2).unwrap();
    let (distinct, counts) = scalar_memberships(&tower);
    let ok = distinct == 15 && counts.len() == 15 && counts.iter().all(|&c| c == 5);
    report(10, ok, t.elapsed(), Duration::from_secs(60), &format!("{distinct} scalar maps, memberships {counts:?}"));
}

#[test]
fn criterion_11_reproducible_certificates() {
    let t = Instant::now();
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("criterion11");
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("p622.json");
    let run = || {
        let status = Command::new(bin())
            .args(["construct", "--n", "6", "--k", "2", "--q", "2", "--mode", "random"])
            .args(["--seed", "7", "--limit", "100000", "--out"])
            .arg(&out)
            .output()
            .unwrap();
        (status.status.code(), std::fs::read(&out).unwrap())
    };
    let (code_a, a) = run();
    let (code_b, b) = run();
    let identical = a == b && code_a == code_b && matches!(code_a, Some(0 | 4 | 5));
    let certify = |path: &std::path::Path| Command::new(bin()).arg("certify").arg(path).output().unwrap().status.code();
    let accepted = certify(&out) == Some(0) && certify_bytes(&a).is_ok();

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mutant = dir.join("mutant.json");
    let mut rejected = 0;
    for _ in 0..100 {
        let mut m = a.clone();
        let pos = rng.random_range(0..m.len());
        let old = m[pos];
        m[pos] = loop {
            let b: u8 = rng.random();
            if b != old {
                break b;
            }
        };
        std::fs::write(&mutant, &m).unwrap();
        if certify(&mutant) == Some(3) {
            rejected += 1;
        }
    }
    let ok = identical && accepted && rejected == 100;
    report(
        11,
        ok,
        t.elapsed(),
        Duration::from_secs(300),
        &format!("identical {identical}, certified {accepted}, mutations rejected {rejected}/100, exit {code_a:?}"),
    );
}

#[test]
#[ignore = "stretch: exhaustive scan of GL(4,3), run with --ignored"]
fn criterion_12_exhaustive_4_2_3() {
    let t = Instant::now();
    let tower = tower_for(4, 2, 3).unwrap();
    let cfg = SearchConfig { workers: 4, early_exit: false, ..SearchConfig::default() };
    let out = greedy_construct(&cfg, &tower).unwrap();
    let ok = out.parallelism.certify(tower.scalars()).is_ok() && out.accepted() >= 2;
    report(
        12,
        ok,
        t.elapsed(),
        Duration::from_secs(1800),
        &format!("accepted {} after {} candidates, full {}", out.accepted(), out.scanned, out.reached_upper_bound),
    );
}
