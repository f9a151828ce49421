//! Reports: a human-readable block followed by `key=value` lines in a fixed order.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::verifiers::{
    BalanceReport, BurgersSanityReport, ConvergenceReport, EntropyReport, Ladder,
    MassBalanceReport, StabilityReport, SupReport,
};

pub trait Report {
    /// Key prefix of the machine section.
    fn kind(&self) -> &'static str;
    fn pass(&self) -> bool;
    fn human(&self) -> String;
    /// Machine entries without the prefix; `pass` is added by [`render_report`].
    fn entries(&self) -> Vec<(String, String)>;
}

/// `0` for zero, otherwise the shortest string that parses back to the same double.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:?}")
    }
}

fn join(x: impl IntoIterator<Item = String>) -> String {
    x.into_iter().collect::<Vec<_>>().join(",")
}

fn kv(key: &str, value: impl Into<String>) -> (String, String) {
    (key.to_string(), value.into())
}

fn num(key: &str, x: f64) -> (String, String) {
    kv(key, fmt_num(x))
}

pub fn render_report(report: &dyn Report) -> String {
    let mut s = report.human();
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s.push('\n');
    let kind = report.kind();
    writeln!(s, "{kind}.pass={}", report.pass()).expect("writing to a string");
    for (k, v) in report.entries() {
        writeln!(s, "{kind}.{k}={v}").expect("writing to a string");
    }
    s
}

pub fn write_report(report: &dyn Report, path: &Path) -> Result<()> {
    std::fs::write(path, render_report(report)).map_err(|e| Error::io(path, e))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

impl Report for BalanceReport {
    fn kind(&self) -> &'static str {
        "balance"
    }
    fn pass(&self) -> bool {
        BalanceReport::pass(self)
    }
    fn human(&self) -> String {
        format!(
            "L^(alpha+1) balance, alpha = {}\n  N(0) = {:e}\n  terminal residual = {:e} ({:e} relative)\n  {}",
            self.alpha,
            self.initial_norm,
            self.terminal_residual,
            self.relative_terminal,
            verdict(self.pass())
        )
    }
    fn entries(&self) -> Vec<(String, String)> {
        vec![
            num("alpha", self.alpha),
            num("initial_norm", self.initial_norm),
            num("terminal_residual", self.terminal_residual),
            num("relative_terminal", self.relative_terminal),
            num("max_rate_defect", self.max_rate_defect),
            kv("steps", (self.times.len() - 1).to_string()),
        ]
    }
}

impl Report for MassBalanceReport {
    fn kind(&self) -> &'static str {
        "mass_balance"
    }
    fn pass(&self) -> bool {
        MassBalanceReport::pass(self)
    }
    fn human(&self) -> String {
        format!(
            "Mass balance with closed-form source\n  M(0) = {:e}, M(T) - M(0) = {:e}\n  max relative residual = {:e}\n  boundary outflow = {:e}\n  {}",
            self.initial_mass,
            self.mass_change,
            self.max_residual,
            self.boundary_outflow,
            verdict(self.pass())
        )
    }
    fn entries(&self) -> Vec<(String, String)> {
        vec![
            num("initial_mass", self.initial_mass),
            num("mass_change", self.mass_change),
            num("max_residual", self.max_residual),
            num("initial_closure", self.initial_closure),
            num("boundary_outflow", self.boundary_outflow),
        ]
    }
}

impl Report for SupReport {
    fn kind(&self) -> &'static str {
        "sup"
    }
    fn pass(&self) -> bool {
        self.holds()
    }
    fn human(&self) -> String {
        let mut s = format!(
            "Sup monitor\n  sup u0 = {}\n  max sup u(t) = {} (excess {:e}) at t = {}, x = {} ({})",
            self.sup_u0,
            self.max_sup_u,
            self.worst_excess,
            self.worst.time,
            self.worst.x,
            self.worst.side.as_str()
        );
        match &self.first_violation {
            Some(v) => write!(
                s,
                "\n  first excess above {:e} at t = {}, x = {} ({})",
                self.tol,
                v.time,
                v.x,
                v.side.as_str()
            )
            .expect("writing to a string"),
            None => write!(s, "\n  no excess above {:e}", self.tol).expect("writing to a string"),
        }
        s
    }
    fn entries(&self) -> Vec<(String, String)> {
        let mut e = vec![
            num("sup_u0", self.sup_u0),
            num("tol", self.tol),
            num("max_sup_u", self.max_sup_u),
            num("worst_excess", self.worst_excess),
            num("worst_time", self.worst.time),
            num("worst_x", self.worst.x),
            kv("worst_side", self.worst.side.as_str()),
        ];
        if let Some(v) = &self.first_violation {
            e.push(num("violation_time", v.time));
            e.push(num("violation_x", v.x));
            e.push(kv("violation_side", v.side.as_str()));
        }
        e
    }
}

impl Report for EntropyReport {
    fn kind(&self) -> &'static str {
        "entropy"
    }
    fn pass(&self) -> bool {
        EntropyReport::pass(self)
    }
    fn human(&self) -> String {
        format!(
            "Kruzhkov entropy inequality\n  family: {}\n  levels: {}\n  worst normalized value = {:e} at k = {}, hat center (t, x) = ({}, {})\n  tolerance = {:e}\n  quadratic entropy worst = {:e} (informational)\n  {}",
            self.family,
            join(self.levels.iter().map(|k| fmt_num(*k))),
            self.worst,
            self.worst_level,
            self.worst_hat.0,
            self.worst_hat.1,
            self.tol,
            self.quadratic_worst,
            verdict(self.pass())
        )
    }
    fn entries(&self) -> Vec<(String, String)> {
        vec![
            kv("levels", join(self.levels.iter().map(|k| fmt_num(*k)))),
            num("worst", self.worst),
            num("worst_level", self.worst_level),
            num("worst_t", self.worst_hat.0),
            num("worst_x", self.worst_hat.1),
            num("tol", self.tol),
            num("violation_margin", self.violation_margin()),
            num("quadratic_worst", self.quadratic_worst),
        ]
    }
}

impl Report for StabilityReport {
    fn kind(&self) -> &'static str {
        "stability"
    }
    fn pass(&self) -> bool {
        StabilityReport::pass(self)
    }
    fn human(&self) -> String {
        let mut s = format!(
            "L1 stability on [-R, R], R = {}, T = {}\n  sup u0 = {}, sup w0 = {}\n  C0 = {}, C(T) = {}\n  t  measured  bound  bound(C(T) widening)  margin",
            self.radius, self.final_time, self.sup_u0, self.sup_w0, self.c0, self.c_t
        );
        for p in &self.samples {
            write!(
                s,
                "\n  {}  {:e}  {:e}  {:e}  {:e}",
                p.time, p.measured, p.bound, p.bound_wide, p.margin
            )
            .expect("writing to a string");
        }
        write!(s, "\n  {}", verdict(self.pass())).expect("writing to a string");
        s
    }
    fn entries(&self) -> Vec<(String, String)> {
        let mut e = vec![
            num("radius", self.radius),
            num("T", self.final_time),
            num("sup_u0", self.sup_u0),
            num("sup_w0", self.sup_w0),
            num("C0", self.c0),
            num("C_T", self.c_t),
            num("max_measured", self.max_measured()),
            num("min_margin", if self.samples.is_empty() { 0.0 } else { self.min_margin() }),
        ];
        for (k, p) in self.samples.iter().enumerate() {
            e.push(num(&format!("sample.{k}.t"), p.time));
            e.push(num(&format!("sample.{k}.measured"), p.measured));
            e.push(num(&format!("sample.{k}.bound"), p.bound));
            e.push(num(&format!("sample.{k}.bound_wide"), p.bound_wide));
        }
        e
    }
}

impl Report for ConvergenceReport {
    fn kind(&self) -> &'static str {
        "convergence"
    }
    fn pass(&self) -> bool {
        self.monotone
    }
    fn human(&self) -> String {
        let (name, rungs) = match &self.ladder {
            Ladder::Epsilon(e) => ("epsilon", e.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>()),
            Ladder::Cells(n) => ("n_cells", n.iter().map(|x| x.to_string()).collect()),
        };
        let mut s = format!("Convergence ladder over {name}: {}", rungs.join(", "));
        for (k, d) in self.distances.iter().enumerate() {
            write!(s, "\n  distance[{k}] = {d:e}").expect("writing to a string");
        }
        for (k, c) in self.cauchy.iter().enumerate() {
            write!(s, "\n  cauchy[{k}] = {c:e}").expect("writing to a string");
        }
        for (k, o) in self.orders.iter().enumerate() {
            write!(s, "\n  order[{k}] = {o:.3}").expect("writing to a string");
        }
        write!(s, "\n  {}", verdict(self.monotone)).expect("writing to a string");
        s
    }
    fn entries(&self) -> Vec<(String, String)> {
        let mut e = match &self.ladder {
            Ladder::Epsilon(x) => vec![
                kv("parameter", "epsilon"),
                kv("ladder", join(x.iter().map(|v| fmt_num(*v)))),
            ],
            Ladder::Cells(n) => vec![
                kv("parameter", "n_cells"),
                kv("ladder", join(n.iter().map(|v| v.to_string()))),
            ],
        };
        e.push(kv("monotone", self.monotone.to_string()));
        for (k, d) in self.distances.iter().enumerate() {
            e.push(num(&format!("distance.{k}"), *d));
        }
        for (k, c) in self.cauchy.iter().enumerate() {
            e.push(num(&format!("cauchy.{k}"), *c));
        }
        for (k, o) in self.orders.iter().enumerate() {
            e.push(num(&format!("order.{k}"), *o));
        }
        e
    }
}

impl Report for BurgersSanityReport {
    fn kind(&self) -> &'static str {
        "burgers"
    }
    fn pass(&self) -> bool {
        BurgersSanityReport::pass(self)
    }
    fn human(&self) -> String {
        format!(
            "Pure-transport Riemann problems, n_cells = {}, T = {}\n  shock (2, 1): at {} , expected {} (error {:e}, tol {:e})\n  rarefaction (0, 1): L1 error {:e} (tol {:e})\n  {}",
            self.n_cells,
            self.final_time,
            self.shock_position,
            self.shock_expected,
            self.shock_error,
            self.shock_tol(),
            self.rarefaction_l1,
            self.rarefaction_tol(),
            verdict(self.pass())
        )
    }
    fn entries(&self) -> Vec<(String, String)> {
        vec![
            kv("n_cells", self.n_cells.to_string()),
            num("dx", self.dx),
            num("shock_position", self.shock_position),
            num("shock_error", self.shock_error),
            num("rarefaction_l1", self.rarefaction_l1),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::SchemeConfig;
    use crate::solver::{run_simulation, RunConfig};
    use crate::verifiers::{grid_convergence, l1_stability_check, lp_balance_residual};

    fn keys(text: &str) -> Vec<(&str, &str)> {
        text.lines().filter_map(|l| l.split_once('=')).filter(|(k, _)| !k.contains(' ')).collect()
    }

    #[test]
    fn numbers() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(0.1), "0.1");
        assert_eq!(fmt_num(1e-10), "1e-10");
        for x in [1.0 / 3.0, 2.0f64.sqrt(), 6.02e23, -4.9e-324] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn identical_stability_runs() {
        let cfg = RunConfig::stock(64).with_snapshots(vec![0.0, 0.5, 1.0]);
        let a = run_simulation(&cfg).unwrap();
        let r = l1_stability_check(&a, &a, 2.0, &[0.5, 1.0]).unwrap();
        let text = render_report(&r);
        let k = keys(&text);
        assert!(k.contains(&("stability.pass", "true")));
        assert!(k.contains(&("stability.max_measured", "0")));
    }

    #[test]
    fn frozen_balance() {
        let cfg = RunConfig {
            grid: crate::grid::Grid::new(-5.0, 5.0, 64).unwrap(),
            final_time: 0.1,
            ..RunConfig::stock(64)
        }
        .with_scheme(SchemeConfig {
            transport: false,
            source: false,
            ..Default::default()
        });
        let out = run_simulation(&cfg).unwrap();
        let text = render_report(&lp_balance_residual(&out, 0.0).unwrap());
        assert!(keys(&text).contains(&("balance.terminal_residual", "0")));
    }

    #[test]
    fn three_level_ladder_keys() {
        let base = RunConfig {
            final_time: 0.1,
            ..RunConfig::stock(64)
        };
        let text = render_report(&grid_convergence(&base, &[64, 128, 256]).unwrap());
        let k = keys(&text);
        let count = |p: &str| k.iter().filter(|(key, _)| key.starts_with(p)).count();
        assert_eq!(count("convergence.distance."), 2);
        assert_eq!(count("convergence.order."), 1);
        assert_eq!(count("convergence.cauchy."), 0);
    }

    #[test]
    fn rendering_is_deterministic() {
        let base = RunConfig {
            final_time: 0.1,
            ..RunConfig::stock(64)
        };
        let a = render_report(&grid_convergence(&base, &[64, 128]).unwrap());
        let b = render_report(&grid_convergence(&base, &[64, 128]).unwrap());
        assert_eq!(a, b);
    }
}
