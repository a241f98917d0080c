//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with `harness = false` so the report is always printed.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nlmi::analytic::{
    delta_x, delta_x_linear, improvement_ratio, mean_m0_squared, mean_m_exact, var_m, var_m_with,
    ValidityThresholds, VarianceForm,
};
use nlmi::oracle::{dim_with_margin, monte_carlo_phase, noisy_moments, verify_displacement};
use nlmi::params::{
    derive, refractive_index, refractive_index_from_intensity, MediumSpec, NoiseSpec, Preset, PulseSpec,
};
use nlmi::sweep::regime_report;
use nlmi::verify::{
    oracle_moments, relative_error, rest_phase, run_verify, Family, VerifyConfig, VARIANCE_OFFSETS,
};

const MEAN_TOLERANCE: f64 = 1e-9;
const MEAN_RUNTIME: Duration = Duration::from_secs(60);
const DISPLACEMENT_TOLERANCE: f64 = 1e-10;
const M2_TOLERANCE: f64 = 1e-9;
const NOISE_TOLERANCE: f64 = 1e-9;
const ORDER_FACTOR: f64 = 5.0;
const IDENTITY_DRAWS: usize = 1000;
const MC_SAMPLES: usize = 100_000;
const MC_SEED: u64 = 42;
const MC_Z: f64 = 3.0;
const DIM_MARGIN: f64 = 20.0;

type Outcome = Result<String, String>;
type PhaseFn = Box<dyn Fn(f64) -> f64>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_mean_equivalence() -> Outcome {
    let config = VerifyConfig {
        families: vec![Family::Mean],
        tolerance: MEAN_TOLERANCE,
        ..VerifyConfig::default()
    };
    let start = Instant::now();
    let report = run_verify(&config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let worst = report.cases.iter().map(|c| c.error).fold(0.0, f64::max);
    let all = report.cases.iter().all(|c| c.error <= MEAN_TOLERANCE);
    check(
        all && !report.cases.is_empty() && elapsed < MEAN_RUNTIME,
        format!("{} cases, worst rel err {worst:.2e}, {:.2} s", report.cases.len(), elapsed.as_secs_f64()),
    )
}

fn displacement_identity() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for mu in [0.0, 0.25, 0.5, 1.0, 2.0, 3.5, 5.0, 7.5, 10.0] {
        let beta = Complex64::from_polar(f64::sqrt(mu), 0.7);
        for i in 0..=24 {
            let z = PI * i as f64 / 24.0;
            let r = verify_displacement(beta, z, dim_with_margin(mu, DIM_MARGIN)).map_err(|e| e.to_string())?;
            worst = worst.max(r);
            count += 1;
        }
    }
    check(worst < DISPLACEMENT_TOLERANCE, format!("{count} cases, worst residual {worst:.2e}"))
}

fn variance_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 0..=25 {
        let n = n as f64;
        for chi in [0.0, 0.1] {
            let phi0 = rest_phase(chi);
            for off in VARIANCE_OFFSETS {
                let m = oracle_moments(n, chi, phi0, phi0, off, DIM_MARGIN).map_err(|e| e.to_string())?;
                worst = worst.max(relative_error(m.mean_m2, mean_m0_squared(n, off)));
                count += 1;
            }
        }
    }
    check(worst <= M2_TOLERANCE, format!("{count} cases, worst rel err {worst:.2e}"))
}

fn noise_assembly() -> Outcome {
    let mut count = 0;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_exact = 0.0f64;
    for n in [1.0, 4.0, 9.0, 16.0, 25.0] {
        let chi = 0.1;
        let phi0 = rest_phase(chi);
        let base = oracle_moments(n, chi, phi0, phi0, 0.0, DIM_MARGIN).map_err(|e| e.to_string())?;
        for sigma in [0.0, 0.05, 0.2] {
            for eta in [0.5, 1.0] {
                for nt in [0.0, 2.0] {
                    let noise = NoiseSpec { efficiency: eta, phase_sigma: sigma, thermal_photons: nt };
                    let var = noisy_moments(&base, &noise).map_err(|e| e.to_string())?.variance_m();
                    let small = var_m(n, eta, sigma, nt);
                    let exact = var_m_with(VarianceForm::Exact, n, eta, sigma, nt);
                    let allowed = (small - exact).abs() + NOISE_TOLERANCE * small.abs().max(1.0);
                    worst_excess = worst_excess.max((var - small).abs() - allowed);
                    worst_exact = worst_exact.max(relative_error(var, exact));
                    count += 1;
                }
            }
        }
    }
    check(
        worst_excess <= 0.0 && worst_exact <= NOISE_TOLERANCE,
        format!("{count} cases, within sigma^4 bound, rel err vs exact form {worst_exact:.2e}"),
    )
}

fn regime_reproduction() -> Outcome {
    let thresholds = ValidityThresholds::default();
    let mut failures = Vec::new();
    let mut checked = 0;
    let quoted: [(Preset, [(&str, f64); 9]); 2] = [
        (
            Preset::Natural,
            [
                ("N", 1e21),
                ("chi", 1e-18),
                ("dx", 1e-21),
                ("dx_lin", 1e-18),
                ("improvement", 1e-3),
                ("l0", 1e12),
                ("x_max", 1e-10),
                ("sigma_max", 1e-8),
                ("nt_max", 1e6),
            ],
        ),
        (
            Preset::GiantEit,
            [
                ("N", 1e14),
                ("chi", 1e-8),
                ("dx", 1e-20),
                ("dx_lin", 1e-14),
                ("improvement", 1e-6),
                ("l0", 100.0),
                ("x_max", 1e-13),
                ("sigma_max", 1e-1),
                ("nt_max", 1e12),
            ],
        ),
    ];
    for (preset, values) in quoted {
        let r = regime_report(preset, 1, thresholds).map_err(|e| e.to_string())?;
        for (name, quoted) in values {
            let got = match name {
                "N" => r.row.n_photons,
                "chi" => r.row.chi,
                "dx" => r.row.delta_x_m,
                "dx_lin" => r.row.delta_x_linear_m,
                "improvement" => r.row.improvement,
                "l0" => r.arm_length_m,
                "x_max" => r.signal_window.x_max_m,
                "sigma_max" => r.sigma_max,
                "nt_max" => r.nt_max,
                _ => unreachable!(),
            };
            let ratio = got / quoted;
            checked += 1;
            if !(1.0 / ORDER_FACTOR..=ORDER_FACTOR).contains(&ratio) {
                failures.push(format!("{preset} {name}={got:e} (quoted {quoted:e})"));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{checked} quantities within x{ORDER_FACTOR} of quoted orders"))
    } else {
        Err(failures.join("; "))
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.random_range(lo..hi))
}

fn algebraic_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(MC_SEED);
    for draw in 0..IDENTITY_DRAWS {
        let pulse = PulseSpec {
            wavelength: log_uniform(&mut rng, -7.0, -5.0),
            duration: log_uniform(&mut rng, -15.0, -6.0),
            cross_section: log_uniform(&mut rng, -12.0, -4.0),
            power: log_uniform(&mut rng, 0.0, 16.0),
        };
        let medium = MediumSpec {
            linear_index: rng.random_range(1.0..2.5),
            kerr_coefficient: log_uniform(&mut rng, -26.0, -10.0),
        };
        let eta = rng.random_range(0.01..=1.0);
        let sigma = rng.random_range(0.0..0.5);
        let nt = rng.random_range(0.0..100.0);
        let d = derive(&pulse, &medium).map_err(|e| e.to_string())?;
        let (n, chi, k) = (d.photons, d.chi, d.wavenumber);
        let fail = |what: &str| Err(format!("draw {draw}: {what}"));

        if delta_x(n, 0.0, k, eta, 0.0, nt) != delta_x_linear(n, k, eta, nt) {
            return fail("delta_x(chi=0, sigma=0) != delta_x_linear");
        }
        let ratio = delta_x(n, chi, k, eta, sigma, nt) / delta_x_linear(n, k, eta, nt);
        if relative_error(ratio, improvement_ratio(n, chi, eta, sigma, nt)) > 1e-12 {
            return fail("delta_x / delta_x_linear != improvement");
        }
        let ideal = improvement_ratio(n, chi, 1.0, 0.0, 0.0) * (1.0 + chi * n / 2.0);
        if (ideal - 1.0).abs() > 1e-12 {
            return fail("improvement * (1 + chi N / 2) != 1");
        }
        let (a, b) = (refractive_index(&medium, &d), refractive_index_from_intensity(&medium, &d));
        if (a - b).abs() > 1e-13 * b {
            return fail("n0(1 + chi N) != n0 + n2 I");
        }
        let s = 2f64.powi(rng.random_range(-20..=20));
        let longer = derive(&PulseSpec { duration: pulse.duration * s, ..pulse }, &medium)
            .map_err(|e| e.to_string())?;
        let wider = derive(&PulseSpec { cross_section: pulse.cross_section * s, ..pulse }, &medium)
            .map_err(|e| e.to_string())?;
        if longer.chi * s != chi || wider.chi * s != chi {
            return fail("chi not exactly inverse in tau or A");
        }
    }
    Ok(format!("{IDENTITY_DRAWS} seeded draws, all identities hold"))
}

fn gaussian_average() -> Outcome {
    let mut worst = 0.0f64;
    let (n, chi, p1, p2): (f64, f64, f64, f64) = (9.0, 0.1, 0.3, 0.5);
    let at_zero = mean_m_exact(n, chi, p1, p2, 0.0, 1.0);
    for sigma in [0.1f64, 0.3] {
        let cases: [(PhaseFn, f64); 4] = [
            (Box::new(f64::cos), (-sigma * sigma / 2.0).exp()),
            (Box::new(|p: f64| (2.0 * p).cos()), (-2.0 * sigma * sigma).exp()),
            (
                Box::new(move |p| mean_m_exact(n, chi, p1, p2, p, 1.0)),
                (-sigma * sigma / 2.0).exp() * at_zero,
            ),
            (
                Box::new(move |p| mean_m0_squared(n, 0.4 + p)),
                n * n / 2.0 + n - n * n / 2.0 * (-2.0 * sigma * sigma).exp() * 0.8f64.cos(),
            ),
        ];
        for (f, expected) in cases {
            let avg = monte_carlo_phase(f, sigma, MC_SAMPLES, MC_SEED).map_err(|e| e.to_string())?;
            worst = worst.max(avg.z_score(expected).abs());
        }
    }
    check(worst <= MC_Z, format!("8 averages, {MC_SAMPLES} samples, worst |z| {worst:.2}"))
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nlmi-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_nlmi"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn manifest_without_timestamp(path: &std::path::Path) -> Result<serde_json::Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    value.as_object_mut().ok_or("manifest is not an object")?.remove("timestamp_unix");
    Ok(value)
}

fn determinism() -> Outcome {
    let dir = scratch_dir();
    let sweep = [
        "sweep", "--regime", "giant-eit", "--grid", "tau=1e-11:1e-9:7:log", "--grid", "sigma=0:0.1:5",
    ];
    let runs: [&[&str]; 3] = [&["verify", "--seed", "42"], &["verify", "--seed", "42", "--format", "json"], &sweep];
    for args in runs {
        let mut files = Vec::new();
        let mut stdouts = Vec::new();
        for i in 0..2 {
            stdouts.push(run_cli(args)?);
            let path = dir.join(format!("run{i}.out"));
            let mut with_output = args.to_vec();
            let p = path.to_str().unwrap().to_owned();
            with_output.extend(["--output", &p]);
            run_cli(&with_output)?;
            let body = std::fs::read(&path).map_err(|e| e.to_string())?;
            let manifest = manifest_without_timestamp(&PathBuf::from(format!("{p}.manifest.json")))?;
            files.push((body, manifest));
        }
        if stdouts[0] != stdouts[1] || stdouts[0] != files[0].0 {
            return Err(format!("{args:?}: outputs differ between runs"));
        }
        if files[0].0 != files[1].0 {
            return Err(format!("{args:?}: output files differ"));
        }
        let strip_cmd = |v: &serde_json::Value| {
            let mut v = v.clone();
            v.as_object_mut().map(|o| o.remove("command_line"));
            v
        };
        if strip_cmd(&files[0].1) != strip_cmd(&files[1].1) {
            return Err(format!("{args:?}: manifests differ beyond the timestamp"));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok("verify (text, json) and a 35-row sweep byte-identical across runs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle-analytic mean equivalence", oracle_mean_equivalence),
        ("coherent displacement identity", displacement_identity),
        ("variance closed form", variance_closed_form),
        ("noise assembly", noise_assembly),
        ("regime reproduction", regime_reproduction),
        ("algebraic identities", algebraic_identities),
        ("gaussian-average cross-check", gaussian_average),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
