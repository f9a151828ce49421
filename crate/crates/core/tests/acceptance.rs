//! Acceptance criteria, one line each. Exits non-zero when any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use exprabelo::field::{Bump, InitialData};
use exprabelo::io::{read_snapshot_csv, write_snapshot_csv};
use exprabelo::scheme::{burgers_flux, godunov_flux, rusanov_flux, semi_discrete_rhs, SchemeConfig};
use exprabelo::verifiers::{
    balance_ladder, burgers_sanity, epsilon_convergence, expansion_shock_fixture,
    kruzhkov_residual, l1_stability_check, mass_balance_identity, mass_balance_ladder,
    mms_convergence, stability_constants, sup_principle_monitor, EntropyParams,
    DEFAULT_EPSILON_LADDER, DEFAULT_SUP_TOL,
};
use exprabelo::{init_field, prefix_integral, run_simulation, Grid, RunConfig};
use statrs::function::erf::erf;

type Outcome = (bool, String);

fn ulps(a: f64, b: f64) -> u64 {
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

fn flux_suite() -> Outcome {
    let mut worst = 0;
    for k in 0..=8000 {
        let a = -4.0 + k as f64 * 1e-3;
        worst = worst
            .max(ulps(godunov_flux(a, a), burgers_flux(a)))
            .max(ulps(rusanov_flux(a, a), burgers_flux(a)));
    }
    let g = [godunov_flux(1.0, 2.0), godunov_flux(2.0, 1.0), godunov_flux(-1.0, 1.0)];
    let ok = worst <= 4 && g == [0.5, 2.0, 0.0];
    (ok, format!("consistency worst {worst} ulp (<= 4); godunov (1,2),(2,1),(-1,1) = {g:?}"))
}

fn nonlocal_suite() -> Outcome {
    // dyadic spacing makes the identity representable
    let g = Grid::new(-8.0, 8.0, 1024).unwrap();
    let p = prefix_integral(&g, &vec![1.0; 1024]).unwrap();
    let identity = p.cells == g.centers();
    let anchor = p.interfaces[g.anchor()] == 0.0;

    let g = Grid::new(-8.0, 8.0, 4096).unwrap();
    let v: Vec<f64> = g.centers().iter().map(|x| (-x * x).exp()).collect();
    let tail = (prefix_integral(&g, &v).unwrap().right() - PI.sqrt() / 2.0).abs();

    let err = |n: usize| {
        let g = Grid::new(-4.0, 4.0, n).unwrap();
        let v: Vec<f64> = g.centers().iter().map(|x| (-x * x).exp()).collect();
        let p = prefix_integral(&g, &v).unwrap();
        g.centers()
            .iter()
            .zip(&p.cells)
            .map(|(x, pi)| (pi - PI.sqrt() / 2.0 * erf(*x)).abs())
            .fold(0.0, f64::max)
    };
    let e = [err(128), err(256), err(512)];
    let orders = [(e[0] / e[1]).log2(), (e[1] / e[2]).log2()];
    let ok = identity && anchor && tail <= 1e-6 && orders.iter().all(|o| *o >= 1.8);
    (
        ok,
        format!(
            "P = x exact: {identity}; anchor 0: {anchor}; tail error {tail:.2e} (<= 1e-6); orders {:.3}, {:.3} (>= 1.8)",
            orders[0], orders[1]
        ),
    )
}

fn burgers() -> Outcome {
    let r = burgers_sanity(1024, 1.0).unwrap();
    (
        r.pass(),
        format!(
            "shock error {:.2e} (<= {:.2e}); rarefaction L1 {:.2e} (<= {:.2e})",
            r.shock_error,
            r.shock_tol(),
            r.rarefaction_l1,
            r.rarefaction_tol()
        ),
    )
}

const LADDER: [usize; 3] = [512, 1024, 2048];

fn lp_balance() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for eps in [0.0, 1e-2] {
        let base = RunConfig::stock(1024).with_scheme(SchemeConfig::default().with_epsilon(eps));
        for l in balance_ladder(&base, &LADDER).unwrap() {
            let at = l.at(1024).unwrap();
            let good = at <= 1e-2 && l.min_ratio() >= 1.6;
            ok &= good;
            parts.push(format!(
                "eps={eps} a={}: {at:.2e} ratio {:.2}{}",
                l.alpha,
                l.min_ratio(),
                if good { "" } else { " [x]" }
            ));
        }
    }
    (ok, format!("relative residual at 1024 (<= 1e-2), min ratio (>= 1.6): {}", parts.join("; ")))
}

fn mass_balance() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for eps in [0.0, 1e-2] {
        let base = RunConfig::stock(1024).with_scheme(SchemeConfig::default().with_epsilon(eps));
        let l = mass_balance_ladder(&base, &LADDER).unwrap();
        let at = l.max_residual[1];
        let ratio = l.ratios.iter().copied().fold(f64::INFINITY, f64::min);
        ok &= at <= 1e-2 && ratio >= 1.6;
        parts.push(format!("eps={eps}: {at:.2e} ratio {ratio:.2}"));
    }

    // even data: the closure vanishes and the semi-discrete mass rate is the boundary outflow
    let cfg = RunConfig::stock(1024);
    let v0 = init_field(&cfg.grid, &cfg.init).unwrap();
    let p0 = prefix_integral(&cfg.grid, &v0.values).unwrap();
    let closure = 0.5 * (p0.right().powi(2) - p0.left().powi(2));
    let r = semi_discrete_rhs(&cfg.grid, &v0, &p0, &cfg.scheme).unwrap();
    let rate = r.total().iter().sum::<f64>() * cfg.grid.dx();
    let rate_ok = closure == 0.0 && rate.abs() <= 1e-8 + r.boundary_outflow().abs();
    ok &= rate_ok;

    let quiet = cfg.clone().with_scheme(SchemeConfig {
        source: false,
        ..Default::default()
    });
    let m = mass_balance_identity(&run_simulation(&quiet).unwrap()).unwrap();
    let drift = (m.mass_change + m.boundary_outflow).abs();
    let drift_ok = drift <= 1e-8;
    ok &= drift_ok;
    (
        ok,
        format!(
            "max relative residual at 1024 (<= 1e-2), min ratio (>= 1.6): {}; even data: closure {closure:e}, |dM/dt(0)| {:.1e}; source-off |dM + outflow| {drift:.1e} (<= 1e-8)",
            parts.join("; "),
            rate.abs()
        ),
    )
}

fn sup_monitor() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in LADDER {
        let r = sup_principle_monitor(&run_simulation(&RunConfig::stock(n)).unwrap(), DEFAULT_SUP_TOL);
        ok &= r.holds();
        parts.push(format!("n={n}: excess {:.2e}", r.worst_excess));
    }
    let left = RunConfig {
        init: InitialData::Gaussian(Bump {
            center: -2.0,
            ..Bump::STANDARD
        }),
        ..RunConfig::stock(1024)
    };
    let r = sup_principle_monitor(&run_simulation(&left).unwrap(), DEFAULT_SUP_TOL);
    let info = match r.first_violation {
        Some(v) => format!(
            "left-shifted excess {:.2e} first at t={:.3}, x={:.3} ({}), worst x={:.3}",
            r.worst_excess,
            v.time,
            v.x,
            v.side.as_str(),
            r.worst.x
        ),
        None => "left-shifted: no excess".into(),
    };
    (ok, format!("sup u(t) - sup u0 (<= 1e-10): {}; {info} (informational)", parts.join(", ")))
}

fn entropy() -> Outcome {
    let params = EntropyParams::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [512, 1024] {
        let out = run_simulation(&RunConfig::stock(n).with_dense_snapshots()).unwrap();
        let r = kruzhkov_residual(&out, None, &params).unwrap();
        ok &= r.pass();
        parts.push(format!("stock n={n}: min {:.3e} vs -{:.3e}", r.worst, r.tol));
    }
    for n in [512, 1024] {
        let r = expansion_shock_fixture(n, &params).unwrap();
        ok &= !r.pass() && r.violation_margin() >= 10.0;
        parts.push(format!("fixture n={n}: {:.1}x tol", r.violation_margin()));
    }
    (ok, format!("{} (fixture needs >= 10x)", parts.join("; ")))
}

fn stability() -> Outcome {
    let samples: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
    let snaps: Vec<f64> = std::iter::once(0.0).chain(samples.iter().copied()).collect();
    let perturbed = InitialData::TwoBump(
        Bump::STANDARD,
        Bump {
            amplitude: 0.01f64.ln(),
            center: 1.0,
            width: 1.0,
        },
    );
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [512, 1024] {
        let u = run_simulation(&RunConfig::stock(n).with_snapshots(snaps.clone())).unwrap();
        let w = run_simulation(
            &RunConfig {
                init: perturbed,
                ..RunConfig::stock(n)
            }
            .with_snapshots(snaps.clone()),
        )
        .unwrap();
        let r = l1_stability_check(&u, &w, 2.0, &samples).unwrap();
        let (c0, ct) = stability_constants(u.sup_u0(), w.sup_u0(), 2.0, 1.0);
        let consts = c0 == r.c0 && ct == r.c_t && r.c_t == 2.0 * 2.0 + 2.0 * r.c0;
        ok &= consts && r.samples.len() == 10 && r.samples.iter().all(|s| s.margin > 0.0);
        parts.push(format!(
            "n={n}: C0={:.4} C(T)={:.4}, min margin {:.3e}",
            r.c0,
            r.c_t,
            r.min_margin()
        ));
    }
    (ok, format!("{} (> 0 at 10 times)", parts.join("; ")))
}

fn viscosity_ladder() -> Outcome {
    let r = epsilon_convergence(&RunConfig::stock(2048), &DEFAULT_EPSILON_LADDER).unwrap();
    let d: Vec<String> = r.distances.iter().map(|x| format!("{x:.2e}")).collect();
    (r.monotone, format!("L1 distances to eps=0 at n=2048: {} (strictly decreasing)", d.join(", ")))
}

fn mms() -> Outcome {
    let r = mms_convergence(1e-2, &[256, 512, 1024], 1.0).unwrap();
    let e: Vec<String> = r.distances.iter().map(|x| format!("{x:.2e}")).collect();
    let o: Vec<String> = r.orders.iter().map(|x| format!("{x:.3}")).collect();
    (r.min_order() >= 1.5, format!("L1 errors {} orders {} (>= 1.5)", e.join(", "), o.join(", ")))
}

fn determinism_io() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::stock(256).with_snapshots(vec![0.0, 0.5, 1.0]);
    let bytes = |tag: &str| {
        let out = run_simulation(&cfg).unwrap();
        let path = dir.path().join(format!("{tag}.csv"));
        write_snapshot_csv(&out.grid, out.final_snapshot(), &path).unwrap();
        (std::fs::read(&path).unwrap(), path, out)
    };
    let (a, path, out) = bytes("a");
    let (b, _, _) = bytes("b");
    let identical = a == b;
    let t = read_snapshot_csv(&path).unwrap();
    let s = out.final_snapshot();
    let round_trip = t.v == s.v.values && t.u == s.u.values && t.p == s.p.cells;

    let bin = env!("CARGO_BIN_EXE_exprabelo");
    let cfg_path = dir.path().join("stock.cfg");
    std::fs::write(
        &cfg_path,
        "grid.x_min = -8\ngrid.x_max = 8\ngrid.n_cells = 256\nrun.T = 1\nrun.snapshots = 0, 0.5, 1\n",
    )
    .unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "grid.x_min = -8\ngrid.x_max = 8\ngrid.n_cells = 256\nrun.T = 1\nscheme.cfl = 1.5\n").unwrap();
    let status = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    let sim_out = dir.path().join("sim");
    let sim = status(&["simulate", cfg_path.to_str().unwrap(), "--out", sim_out.to_str().unwrap()]);
    let files = (0..3).all(|k| sim_out.join(format!("snapshot_{k:04}.csv")).exists());
    let fixture = status(&[
        "verify",
        "entropy",
        "--fixture",
        "expansion-shock",
        "--out",
        dir.path().join("fx").to_str().unwrap(),
    ]);
    let unknown = status(&["frobnicate"]);
    let bad_cfg = status(&["simulate", bad.to_str().unwrap(), "--out", dir.path().join("b").to_str().unwrap()]);
    let codes = [sim, fixture, unknown, bad_cfg];
    let ok = identical && round_trip && files && codes == [0, 1, 2, 2];
    (
        ok,
        format!(
            "byte-identical: {identical}; csv round trip: {round_trip}; snapshots written: {files}; exit codes simulate/fixture/unknown/bad-config = {codes:?} (expect [0, 1, 2, 2])"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1 flux unit suite", flux_suite),
        ("2 nonlocal operator", nonlocal_suite),
        ("3 pure-transport sanity", burgers),
        ("4 L^(a+1) balance", lp_balance),
        ("5 mass-balance identity", mass_balance),
        ("6 sup monitor", sup_monitor),
        ("7 entropy verification", entropy),
        ("8 L1 stability", stability),
        ("9 vanishing-viscosity ladder", viscosity_ladder),
        ("10 manufactured-solution order", mms),
        ("11 determinism and I/O", determinism_io),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(r) => r,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name} [{:.1}s]: {detail}",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
