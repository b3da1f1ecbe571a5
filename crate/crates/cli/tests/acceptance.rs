use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use deltacert::algebra::{q, Rational};
use deltacert::certify::certify_n;
use deltacert::delta::{s_flag, s_invariant, volume_function};
use deltacert::family::{
    build_sn, default_epsilon, inequality_ledger, FamilyInstance, F, L, L_HAT, O_0, O_1, O_Z, R, R0, R0_HAT, R1,
    R1_HAT, W,
};
use deltacert::link::{b2_link, classify_smale, genus_branch_curve, Torsion, WeightedHypersurface};
use deltacert::par::map_parallel;
use deltacert::surface::LogDelPezzo;
use deltacert::zariski::{decompose_at, decompose_family};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r(a: i64, b: i64) -> Rational {
    q(a, b)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.1?}, limit {limit:?}"))
}

fn instances(ns: std::ops::RangeInclusive<i64>) -> Vec<FamilyInstance> {
    ns.map(|n| build_sn(n).expect("family member")).collect()
}

struct Expected {
    s_l: Rational,
    s_flag_l: Rational,
    s_ri: Rational,
    s_flag_ri: Rational,
    s_r: Rational,
    s_w: Rational,
    s_f: Rational,
    a2: Rational,
    lambda: Rational,
    delta_oz: Rational,
    delta_oi: Rational,
}

fn expected(n: i64) -> Expected {
    let n2 = n * n;
    Expected {
        s_l: r(3 * n + 1, 2 * (2 * n + 1)),
        s_flag_l: r(4 * n2 + 3 * n + 1, 4 * n * (2 * n + 1) * (4 * n + 1)),
        s_ri: r(4 * n2 + 3 * n + 1, 4 * n * (2 * n + 1)),
        s_flag_ri: r(8 * n2 + 7 * n + 1, 8 * n * (2 * n + 1) * (4 * n + 1)),
        s_r: r(
            16 * n2 * n + 16 * n2 + 7 * n + 1,
            2 * (2 * n + 1) * (4 * n + 1) * (4 * n + 1),
        ),
        s_w: r(1, 2 * (4 * n + 1)),
        s_f: r(4 * n + 3, 4 * (4 * n + 1)),
        a2: r(9 * (2 * n + 1), 8 * n * (4 * n + 1)),
        lambda: r(20 * n + 5, 20 * n + 4),
        delta_oz: r(2 * (2 * n + 1), 3 * n + 1).min(r((2 * n + 1) * (4 * n + 1), 4 * n2 + 3 * n + 1)),
        delta_oi: r(4 * n * (2 * n + 1), 4 * n2 + 3 * n + 1)
            .min(r(2 * n * (2 * n + 1) * (4 * n + 1), 8 * n2 + 7 * n + 1)),
    }
}

fn closed_forms() -> Outcome {
    let start = Instant::now();
    let fails: Vec<String> = map_parallel(&instances(2..=50), |inst| {
        let n = inst.n as i64;
        let e = expected(n);
        let checks = [
            ("S(L_xy)", s_invariant(&inst.base, L), e.s_l),
            ("S(W^L_xy;O_z)", s_flag(&inst.base, L, O_Z), e.s_flag_l.clone()),
            ("S(R0)", s_invariant(&inst.base, R0), e.s_ri.clone()),
            ("S(R1)", s_invariant(&inst.base, R1), e.s_ri),
            ("S(W^R0;O_0)", s_flag(&inst.base, R0, O_0), e.s_flag_ri.clone()),
            ("S(W^R1;O_1)", s_flag(&inst.base, R1, O_1), e.s_flag_ri),
            ("S(R)", s_invariant(&inst.enlarged, R), e.s_r),
            ("S(W)", s_invariant(&inst.base, W), e.s_w),
            ("S(F)", s_invariant(&inst.blowup, F), e.s_f),
        ];
        checks
            .into_iter()
            .filter_map(|(label, got, want)| match got {
                Ok(got) if got == want => None,
                Ok(got) => Some(format!("n = {n} {label}: {got} != {want}")),
                Err(err) => Some(format!("n = {n} {label}: {err}")),
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    ensure(fails.is_empty(), || fails.join("; "))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("9 invariants x 49 values of n in {:.1?}", start.elapsed()))
}

/// Negative part of `A - tC` as displayed, by curve name.
fn displayed_negative(curve: &str, n: i64, t: &Rational) -> Vec<(&'static str, Rational)> {
    let k = 4 * n + 1;
    match curve {
        L if t > &r(3, 4) => {
            let c = (r(4, 1) * t - r(3, 1)) / r(2, 1);
            vec![(R0, c.clone()), (R1, c)]
        }
        R0 | R1 if t > &r(3, 4 * n) => {
            let c = (r(4 * n, 1) * t - r(3, 1)) / r(2 * (2 * n - 1), 1);
            vec![(L, c.clone()), (if curve == R0 { R1 } else { R0 }, c)]
        }
        R if t > &r(3, 2 * k) => vec![(L, (r(2 * k, 1) * t - r(3, 1)) / r(2 * (4 * n - 1), 1))],
        F if t > &r(3, 4 * k) => {
            let c = r(2, 1) * t - r(3, 2 * k);
            vec![(L_HAT, c.clone()), (R0_HAT, c.clone()), (R1_HAT, c)]
        }
        _ => vec![],
    }
}

fn zariski_cases(inst: &FamilyInstance) -> Vec<(&LogDelPezzo, &'static str, Vec<Rational>)> {
    let n = inst.n as i64;
    let k = 4 * n + 1;
    vec![
        (&inst.base, L, vec![r(0, 1), r(3, 4), r(3, 2)]),
        (&inst.base, R0, vec![r(0, 1), r(3, 4 * n), r(3, 2)]),
        (&inst.base, R1, vec![r(0, 1), r(3, 4 * n), r(3, 2)]),
        (&inst.enlarged, R, vec![r(0, 1), r(3, 2 * k), r(3, 4)]),
        (&inst.blowup, F, vec![r(0, 1), r(3, 4 * k), r(3 * (2 * n + 1), 2 * k)]),
    ]
}

fn check_zariski(inst: &FamilyInstance) -> Result<usize, String> {
    let n = inst.n as i64;
    let mut samples = 0;
    for (surface, curve, breaks) in zariski_cases(inst) {
        let lat = &surface.lattice;
        let family = decompose_family(surface, curve).map_err(|e| e.to_string())?;
        let at = |what: &str| format!("{curve} at n = {n}: {what}");
        ensure(family.breakpoints() == breaks, || at("breakpoints"))?;
        ensure(&family.tau == breaks.last().unwrap(), || at("tau"))?;
        let c = lat.class_of(curve).map_err(|e| e.to_string())?;
        for seg in &family.segments {
            for j in 0..20 {
                let t = &seg.lo + &((&seg.hi - &seg.lo) * r(2 * j + 1, 40));
                let point = family.eval(lat, &t).map_err(|e| e.to_string())?;
                let want_n = lat
                    .divisor(&displayed_negative(curve, n, &t))
                    .map_err(|e| e.to_string())?;
                let want_p = &(&surface.polarization - &c.scale(&t)) - &want_n;
                ensure(point.negative == want_n, || at(&format!("N at t = {t}")))?;
                ensure(point.positive == want_p, || at(&format!("P at t = {t}")))?;
                for i in want_n.support() {
                    ensure(lat.dot_curve(&want_p, i).is_zero(), || {
                        at(&format!("P.N_{i} at t = {t}"))
                    })?;
                }
                samples += 1;
            }
        }
    }
    Ok(samples)
}

fn zariski_fidelity() -> Outcome {
    let results = map_parallel(&instances(2..=20), check_zariski);
    let mut samples = 0;
    for res in results {
        samples += res?;
    }
    Ok(format!("{samples} sampled t across 5 curves x 19 values of n"))
}

fn random_fraction(rng: &mut ChaCha8Rng, hi: &Rational) -> Rational {
    let den = rng.random_range(1..=1000i64);
    hi * &r(rng.random_range(0..=den), den)
}

fn volume_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for inst in instances(2..=10) {
        let n = inst.n as i64;
        for (surface, curve, _) in zariski_cases(&inst) {
            let at = |what: &str| format!("{curve} at n = {n}: {what}");
            let family = decompose_family(surface, curve).map_err(|e| e.to_string())?;
            let vol = volume_function(surface, curve).map_err(|e| e.to_string())?;
            let eval = |t: &Rational| vol.eval(t).map_err(|e| e.to_string());
            ensure(eval(&r(0, 1))? == expected(n).a2, || at("vol(0)"))?;
            ensure(vol.is_continuous(), || at("continuity"))?;
            ensure(eval(&family.tau)?.is_zero(), || at("vol(tau)"))?;
            for (piece, w) in vol.pieces().iter().zip(vol.breakpoints().windows(2)) {
                let d = piece.derivative();
                ensure(!d.eval(&w[0]).is_positive() && !d.eval(&w[1]).is_positive(), || {
                    at("monotonicity")
                })?;
            }
            for _ in 0..100 {
                let t = random_fraction(&mut rng, &family.tau);
                let p = decompose_at(surface, curve, &t).map_err(|e| e.to_string())?.positive;
                let p2 = surface.lattice.intersect(&p, &p).map_err(|e| e.to_string())?;
                ensure(eval(&t)? == p2, || at(&format!("vol != P^2 at t = {t}")))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} random t, vol(t) = P(t)^2"))
}

fn delta_bounds() -> Outcome {
    let eps = default_epsilon();
    let ns: Vec<i64> = (2..=50).collect();
    let fails: Vec<String> = map_parallel(&ns, |&n| {
        let report = match certify_n(n, &eps) {
            Ok(report) => report,
            Err(e) => return Some(format!("n = {n}: {e}")),
        };
        let e = expected(n);
        let want = [e.delta_oz, e.delta_oi.clone(), e.delta_oi];
        for (flag, want) in report.flags.iter().zip(want) {
            let got = &flag.report.delta_bound;
            if got != &want || got <= &e.lambda {
                return Some(format!(
                    "n = {n} {}: {got} vs {want}, lambda {}",
                    flag.report.point, e.lambda
                ));
            }
        }
        (!report.verdict.is_certified()).then(|| format!("n = {n}: {:?}", report.verdict))
    })
    .into_iter()
    .flatten()
    .collect();
    ensure(fails.is_empty(), || fails.join("; "))?;
    Ok("three flag bounds exceed lambda, verdict certified for n = 2..50".into())
}

fn ledger() -> Outcome {
    let start = Instant::now();
    let eps = default_epsilon();
    let ns: Vec<i64> = (2..=1000).collect();
    let failures: Vec<(i64, Vec<String>)> = map_parallel(&ns, |&n| {
        let inst = build_sn(n).expect("family member");
        let entries = inequality_ledger(&inst, &eps).expect("ledger");
        let bad: Vec<String> = entries.iter().filter(|e| !e.pass).map(|e| e.id.clone()).collect();
        (n, bad)
    })
    .into_iter()
    .filter(|(_, bad)| !bad.is_empty())
    .collect();
    let elapsed = start.elapsed();
    if let Some((first, ids)) = failures.first() {
        let mut all: Vec<&String> = failures.iter().flat_map(|(_, ids)| ids).collect();
        all.sort();
        all.dedup();
        return Err(format!(
            "{} of 999 values fail at epsilon = {eps}; first n = {first} ({}); failing ids overall: {}",
            failures.len(),
            ids.join(", "),
            all.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        ));
    }
    within(elapsed, Duration::from_secs(300))?;
    Ok(format!("every entry holds for n = 2..1000 in {elapsed:.1?}"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    for inst in instances(2..=10) {
        let cases = zariski_cases(&inst);
        let families: Vec<_> = cases
            .iter()
            .map(|(s, c, _)| decompose_family(s, c).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        for _ in 0..100 {
            let i = rng.random_range(0..cases.len());
            let (surface, curve, _) = cases[i];
            let t = random_fraction(&mut rng, &families[i].tau);
            let a = decompose_at(surface, curve, &t).map_err(|e| e.to_string())?;
            let b = families[i].eval(&surface.lattice, &t).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("{curve} at n = {}, t = {t}", inst.n))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} random (curve, t) pairs agree"))
}

/// Exact division of integer polynomials, `None` unless it is exact.
fn divide(num: &[i64], den: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(den[0], 1);
    if num.len() < den.len() {
        return num.iter().all(|&c| c == 0).then(Vec::new);
    }
    let mut rem = num.to_vec();
    let mut quot = vec![0; num.len() - den.len() + 1];
    for i in 0..quot.len() {
        let c = rem[i];
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    rem.iter().all(|&c| c == 0).then_some(quot)
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `b₂` from the Poincaré series of the Milnor algebra: the number of basis
/// monomials whose shifted degree is a multiple of `d`.
fn b2_power_series(weights: &[u64], d: u64) -> Option<u64> {
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for &a in weights {
        let (a, d) = (a as usize, d as usize);
        let mut f = vec![0; d + 1];
        f[a] += 1;
        f[d] -= 1;
        num = poly_mul(&num, &f);
        let mut g = vec![0; a + 1];
        g[0] = 1;
        g[a] = -1;
        den = poly_mul(&den, &g);
    }
    let quot = divide(&num, &den)?;
    let mu: i64 = quot.iter().sum();
    let want_mu = weights
        .iter()
        .map(|&a| r(d as i64, a as i64) - r(1, 1))
        .fold(r(1, 1), |acc, x| acc * x);
    if Rational::from(mu) != want_mu {
        return None;
    }
    Some(
        quot.iter()
            .enumerate()
            .filter(|(i, _)| i % d as usize == 0)
            .map(|(_, &c)| c as u64)
            .sum(),
    )
}

fn link_classification() -> Outcome {
    let mut oracle_cases: Vec<(Vec<u64>, u64)> =
        vec![(vec![1, 1, 1, 1], 3), (vec![1, 1, 1, 1], 4), (vec![2, 3, 3, 3], 9)];
    for n in 2..=6 {
        let h = WeightedHypersurface::family(n);
        oracle_cases.push((h.weights, h.degree));
    }
    for (w, d) in &oracle_cases {
        let oracle = b2_power_series(w, *d).ok_or_else(|| format!("oracle division failed for {w:?}/{d}"))?;
        let engine = b2_link(w, *d).map_err(|e| e.to_string())?;
        ensure(oracle == engine, || {
            format!("{w:?}/{d}: oracle {oracle}, engine {engine}")
        })?;
    }
    ensure(b2_power_series(&[1, 1, 1, 1], 3) == Some(6), || {
        "cubic cone oracle".into()
    })?;
    for n in 2..=50u64 {
        let h = WeightedHypersurface::family(n);
        let smale = classify_smale(n as i64).map_err(|e| e.to_string())?;
        let oracle = b2_power_series(&h.weights, h.degree);
        let label = format!("2M∞ # {n} M₂");
        ensure(
            genus_branch_curve(n) == n
                && smale.torsion == Torsion { m: 2, pairs: n }
                && smale.b2 == 2
                && oracle == Some(2)
                && smale.label == label,
            || format!("n = {n}: {smale:?}, oracle b2 {oracle:?}"),
        )?;
    }
    Ok(format!(
        "oracle agrees on {} hypersurfaces; n = 2..50 give 2M∞ # n M₂",
        oracle_cases.len()
    ))
}

fn run_certify(jobs: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_deltacert"))
        .args(["certify", "--n", "2..20", "--jobs", jobs])
        .env("RUST_LOG", "off")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("--jobs {jobs} exited with {}", out.status)
    })?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let serial = run_certify("1")?;
    let parallel = run_certify("8")?;
    ensure(!serial.is_empty() && serial == parallel, || {
        "serial and parallel reports differ".into()
    })?;
    Ok(format!("{} identical bytes", serial.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("closed-form sweep", closed_forms),
        ("zariski fidelity", zariski_fidelity),
        ("volume properties", volume_properties),
        ("delta bounds", delta_bounds),
        ("inequality ledger", ledger),
        ("oracle equivalence", oracle_equivalence),
        ("link classification", link_classification),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
