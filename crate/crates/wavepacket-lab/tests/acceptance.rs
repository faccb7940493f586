//! Acceptance suite: one line per criterion (and per sub-check), plus a
//! runtime line per criterion. Run with `cargo test --test acceptance`.
//!
//! FAIL lines are reported, not hidden. The process exits non-zero when a
//! criterion cannot be evaluated at all (error or panic), or on any FAIL when
//! ACCEPTANCE_STRICT is set.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::bessel_series_oracle;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavepacket_lab::analysis::{
    verify_dispersive, verify_dual_scale, verify_endpoint, verify_knapp_sharpness, verify_morawetz,
    verify_morawetz_identity, verify_morawetz_weights, verify_spherical_threshold, DispersiveConfig, DualScaleConfig,
    EndpointConfig, EstimateReport, KnappConfig, MorawetzConfig, ThresholdConfig, Verdict,
};
use wavepacket_lab::harmonics::{
    addition_theorem_residual, all_indices, dim_y, eval_basis, point_s2, AngularQuadrature, HarmonicIndex,
};
use wavepacket_lab::propagator::{
    energy_norms, hankel_mode, make_knapp, make_radial_bump, make_random_family, make_random_radial, FieldSampler,
    ModeSet, Propagation, RandomFamily,
};
use wavepacket_lab::specfun::{bessel_j, bessel_j_halfint_integral, BesselOrder};
use wavepacket_lab::wavepackets::{fit_constants, reconstruct_mode, PacketCoefficients, ScanGrid};

struct Line {
    id: String,
    verdict: Verdict,
    text: String,
}

impl Line {
    fn check(id: &str, ok: bool, text: String) -> Line {
        Line { id: id.into(), verdict: Verdict::from_bool(ok), text }
    }

    fn report(id: &str, r: &EstimateReport) -> Line {
        Line {
            id: id.into(),
            verdict: r.verdict,
            text: format!("{}: statistic {:.6} ({})", r.name, r.statistic, r.criterion),
        }
    }
}

type Criterion = fn() -> wavepacket_lab::Result<Vec<Line>>;

fn main() {
    let criteria: [(u32, &str, u64, Criterion); 11] = [
        (1, "special-function oracles", 10, c1_bessel),
        (2, "harmonic identities", 30, c2_harmonics),
        (3, "energy conservation", 120, c3_energy),
        (4, "packet reconstruction", 300, c4_reconstruction),
        (5, "psi constants", 900, c5_constants),
        (6, "dispersive estimate", 600, c6_dispersive),
        (7, "endpoint scaling", 1200, c7_endpoint),
        (8, "spherical threshold", 300, c8_threshold),
        (9, "Knapp sharpness", 900, c9_knapp),
        (10, "dual-scale estimate", 1200, c10_dual),
        (11, "Morawetz", 600, c11_morawetz),
    ];
    let only: Option<Vec<u32>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|v| v.trim().parse().ok()).collect());
    let strict = std::env::var_os("ACCEPTANCE_STRICT").is_some();
    let (mut pass, mut fail, mut other, mut broken) = (0, 0, 0, 0);
    for (k, name, limit, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&k)) {
            continue;
        }
        println!("criterion {k}: {name}");
        let start = Instant::now();
        let lines = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let mut lines = match lines {
            Ok(Ok(lines)) => lines,
            Ok(Err(e)) => {
                broken += 1;
                vec![Line { id: format!("{k}"), verdict: Verdict::Fail, text: format!("error: {e}") }]
            }
            Err(_) => {
                broken += 1;
                vec![Line { id: format!("{k}"), verdict: Verdict::Fail, text: "panicked".into() }]
            }
        };
        lines.push(Line::check(
            &format!("{k}t"),
            elapsed <= Duration::from_secs(limit),
            format!("runtime {:.1} s <= {limit} s", elapsed.as_secs_f64()),
        ));
        for l in &lines {
            println!("  {:<12} {:<5} {}", l.verdict.to_string(), l.id, l.text);
            match l.verdict {
                Verdict::Pass => pass += 1,
                Verdict::Fail => fail += 1,
                _ => other += 1,
            }
        }
    }
    println!("acceptance: {pass} passed, {fail} failed, {other} inconclusive or n/a, {broken} not evaluated");
    if broken > 0 || (strict && fail > 0) {
        std::process::exit(1);
    }
}

fn c1_bessel() -> wavepacket_lab::Result<Vec<Line>> {
    let ys: Vec<f64> = (1..=400).map(|k| 0.05 * k as f64).collect();
    let mut series: f64 = 0.0;
    let mut doubled: f64 = 0.0;
    for twice in (-1..=21).step_by(2) {
        let order = BesselOrder::new(twice)?;
        for &y in &ys {
            let j = bessel_j(order, y)?;
            series = series.max((j - bessel_series_oracle(twice, y)).abs());
        }
        if twice < 1 {
            continue;
        }
        for &y in ys.iter().step_by(8) {
            doubled = doubled.max((bessel_j(order, y)? - bessel_j_halfint_integral(order, y)?).abs());
        }
    }
    let mut integer: f64 = 0.0;
    for s in 0..=10 {
        for &y in ys.iter().step_by(8) {
            let o = BesselOrder::integer(s);
            integer = integer.max((bessel_j(o, y)? - bessel_j_halfint_integral(o, y)?).abs());
        }
    }
    Ok(vec![
        Line::check(
            "1a",
            series <= 1e-9,
            format!("bessel_j vs series oracle, s <= 21/2, y <= 20: max |err| {series:.2e} <= 1e-9"),
        ),
        Line::check(
            "1b",
            doubled <= 1e-9,
            format!(
                "bessel_j vs doubled-interval integral, half-integer 1/2 <= s <= 21/2: max |err| {doubled:.2e} <= 1e-9"
            ),
        ),
        Line::check(
            "1c",
            integer <= 1e-9,
            format!(
                "bessel_j vs doubled-interval integral, integer s <= 10 (control): max |err| {integer:.2e} <= 1e-9"
            ),
        ),
    ])
}

fn gram_error(n: usize, l_max: usize) -> wavepacket_lab::Result<f64> {
    let quad = AngularQuadrature::new(n, 2 * l_max + 2)?;
    let idx = all_indices(n, l_max);
    let area: f64 = quad.weights.iter().sum();
    let m = quad.weights.len();
    let mut v = vec![0.0; idx.len() * m];
    for (a, k) in idx.iter().enumerate() {
        for (j, (w, x)) in quad.weights.iter().zip(&quad.nodes).enumerate() {
            v[a * m + j] = eval_basis(*k, x)? * (w / area).sqrt();
        }
    }
    let d = idx.len();
    let mut g = vec![0.0; d * d];
    unsafe {
        matrixmultiply::dgemm(
            d,
            m,
            d,
            1.0,
            v.as_ptr(),
            m as isize,
            1,
            v.as_ptr(),
            1,
            m as isize,
            0.0,
            g.as_mut_ptr(),
            d as isize,
            1,
        );
    }
    let mut worst: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g[a * d + b] - want).abs());
        }
    }
    Ok(worst)
}

fn binom(a: i128, b: i128) -> i128 {
    if b < 0 || a < b {
        return 0;
    }
    (0..b).fold(1, |acc, j| acc * (a - j) / (j + 1))
}

fn c2_harmonics() -> wavepacket_lab::Result<Vec<Line>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut addition: f64 = 0.0;
    for l in 0..=32 {
        let p3: Vec<Vec<f64>> = (0..50)
            .map(|_| {
                point_s2(rng.random_range(-1.0f64..1.0).acos(), rng.random_range(0.0..std::f64::consts::TAU)).to_vec()
            })
            .collect();
        let p2: Vec<Vec<f64>> = (0..50)
            .map(|_| {
                let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                vec![a.cos(), a.sin()]
            })
            .collect();
        addition = addition.max(addition_theorem_residual(3, l, &p3)?).max(addition_theorem_residual(2, l, &p2)?);
    }
    let mut dims_ok = true;
    for n in 2..=4i128 {
        for l in 0..=64i128 {
            dims_ok &= dim_y(n as usize, l as usize) as i128 == binom(n + l - 1, l) - binom(n + l - 3, l - 2);
        }
    }
    let gram = gram_error(2, 32)?.max(gram_error(3, 32)?).max(gram_error(4, 32)?);
    Ok(vec![
        Line::check(
            "2a",
            addition <= 1e-9,
            format!("addition theorem, l <= 32, n in {{2, 3}}: max residual {addition:.2e} <= 1e-9"),
        ),
        Line::check("2b", dims_ok, "dim Y_l = C(n+l-1, l) - C(n+l-3, l-2) exactly, n in {2, 3, 4}, l <= 64".into()),
        Line::check(
            "2c",
            gram <= 1e-9,
            format!("Gram matrix, l <= 32 (n = 2, 3 full basis; n = 4 zonal): max |G - I| {gram:.2e} <= 1e-9"),
        ),
    ])
}

fn c3_energy() -> wavepacket_lab::Result<Vec<Line>> {
    let generators: Vec<(String, ModeSet)> = vec![
        ("bump n=2".into(), make_radial_bump(2)?),
        ("bump n=3".into(), make_radial_bump(3)?),
        ("bump n=4".into(), make_radial_bump(4)?),
        ("random radial n=3".into(), make_random_radial(3, 5)?),
        ("localized N=4 n=2".into(), make_random_family(2, 4, 5, RandomFamily::Full)?),
        ("localized N=4 n=3".into(), make_random_family(3, 4, 5, RandomFamily::Full)?),
        ("zonal N=4 n=3".into(), make_random_family(3, 4, 5, RandomFamily::Zonal)?),
        ("zonal N=4 n=4".into(), make_random_family(4, 4, 5, RandomFamily::Zonal)?),
        ("Knapp eps=1/4 n=3".into(), make_knapp(3, 0.25, None)?),
        ("Knapp eps=1/4 n=4".into(), make_knapp(4, 0.25, None)?),
    ];
    let times: Vec<f64> = (0..=8).map(|k| 4.0 * k as f64).collect();
    let r_max = 32.0 + 32.0;
    let mut lines = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, data) in &generators {
        let fs = FieldSampler::new(data, Propagation::Forward, r_max + 33.0)?;
        let norms = energy_norms(&fs, &times, r_max)?;
        let f = data.l2_norm();
        let dev = norms.iter().map(|v| (v / f - 1.0).abs()).fold(0.0, f64::max);
        worst = worst.max(dev);
        lines.push(format!("{name}: {dev:.1e}"));
    }
    Ok(vec![Line::check(
        "3",
        worst <= 1e-3,
        format!("max |‖u(t)‖/‖u(0)‖ - 1| over t in {{0, 4, ..., 32}}: {worst:.2e} <= 1e-3 [{}]", lines.join(", ")),
    )])
}

fn c4_reconstruction() -> wavepacket_lab::Result<Vec<Line>> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut lines = Vec::new();
    for l in [0usize, 4, 16] {
        let radial = make_random_radial(3, 40 + l as u64)?;
        let (_, profile) = radial.iter().next().expect("radial data has one mode");
        let idx = HarmonicIndex::new(3, l, 0)?;
        let mut data = ModeSet::new(3)?;
        data.insert(idx, profile.clone())?;
        let pc = PacketCoefficients::from_modes(&data, 512);
        let mut pairs = Vec::new();
        for _ in 0..50 {
            let t: f64 = rng.random_range(0.0..32.0);
            let r: f64 = rng.random_range(0.0..48.0);
            let direct = hankel_mode(idx, profile, t, r)?;
            let packed: Complex64 = reconstruct_mode(&pc, idx, t, r)?;
            pairs.push((direct, packed));
        }
        let scale = pairs.iter().map(|(d, _)| d.norm()).fold(0.0, f64::max);
        let rel = pairs.iter().map(|(d, p)| (d - p).norm() / d.norm().max(1e-3 * scale)).fold(0.0, f64::max);
        lines.push(Line::check(
            &format!("4.l{l}"),
            rel <= 1e-6,
            format!("l = {l}: max relative error at 50 random (t, r): {rel:.2e} <= 1e-6"),
        ));
    }
    Ok(lines)
}

fn c5_constants() -> wavepacket_lab::Result<Vec<Line>> {
    let orders = [(2, 2), (3, 2)];
    let grid = ScanGrid::standard();
    let coarse = fit_constants(3, &orders, &grid)?;
    let fine = fit_constants(3, &orders, &grid.refined())?;
    let finite = coarse.iter().chain(&fine).all(|r| r.c.is_finite());
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (a, b) in coarse.iter().zip(&fine) {
        let change = (b.c - a.c).abs() / a.c.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(change);
        parts.push(format!("({},{}) {:?} {:.4} -> {:.4}", a.n1, a.n2, a.regime, a.c, b.c));
    }
    Ok(vec![
        Line::check("5a", finite, format!("constants finite: {}", parts.join("; "))),
        Line::check("5b", worst <= 0.10, format!("max relative change under 2x refinement: {worst:.2e} <= 0.10")),
    ])
}

fn c6_dispersive() -> wavepacket_lab::Result<Vec<Line>> {
    let r = verify_dispersive(&DispersiveConfig::default())?;
    Ok(vec![Line::report("6", &r)])
}

fn c7_endpoint() -> wavepacket_lab::Result<Vec<Line>> {
    let a = verify_endpoint(&EndpointConfig::default())?;
    let b = verify_endpoint(&EndpointConfig::planar())?;
    Ok(vec![Line::report("7a", &a), Line::report("7b", &b)])
}

fn c8_threshold() -> wavepacket_lab::Result<Vec<Line>> {
    let reps = verify_spherical_threshold(&ThresholdConfig::default())?;
    Ok(reps.iter().enumerate().map(|(i, r)| Line::report(&format!("8{}", sub(i)), r)).collect())
}

fn c9_knapp() -> wavepacket_lab::Result<Vec<Line>> {
    let reps = verify_knapp_sharpness(&KnappConfig::default())?;
    Ok(reps.iter().enumerate().map(|(i, r)| Line::report(&format!("9{}", sub(i)), r)).collect())
}

fn c10_dual() -> wavepacket_lab::Result<Vec<Line>> {
    let r = verify_dual_scale(&DualScaleConfig::default())?;
    Ok(vec![Line::report("10", &r)])
}

fn c11_morawetz() -> wavepacket_lab::Result<Vec<Line>> {
    let cfg = MorawetzConfig::default();
    let mut reps: Vec<EstimateReport> =
        verify_morawetz(&cfg)?.into_iter().filter(|r| r.name == "morawetz-saturation").collect();
    reps.extend(verify_morawetz_weights()?);
    reps.extend(verify_morawetz_identity(&cfg)?);
    Ok(reps.iter().enumerate().map(|(i, r)| Line::report(&format!("11{}", sub(i)), r)).collect())
}

fn sub(i: usize) -> char {
    (b'a' + i as u8) as char
}
