//! Exact small examples; every check must hold on any build.

use apsets::*;

use crate::config::ExperimentConfig;
use crate::table::{Cell, Sink, Table};

type Check = (&'static str, fn() -> apsets::Result<bool>);

fn set(x: u64, v: &[u64]) -> IntegerSet {
    IntegerSet::from_members(x, v.iter().copied()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

const CHECKS: &[Check] = &[
    ("kfree-2-to-3", || Ok(gen_kfree(2, 3)?.to_vec() == [1, 2, 3])),
    ("beatty-2-to-1", || Ok(gen_beatty(2, 1)?.to_vec() == [1])),
    ("periodic-full", || {
        Ok(gen_periodic(1, &[0], 5)? == IntegerSet::full(5)?)
    }),
    ("periodic-odd", || Ok(gen_periodic(2, &[1], 6)?.to_vec() == [1, 3, 5])),
    ("periodic-mod-3", || {
        Ok(gen_periodic(3, &[1, 2], 9)?.to_vec() == [1, 2, 4, 5, 7, 8])
    }),
    ("multiplicative-all", || {
        Ok(gen_multiplicative(&MultiplicativeSpec::all(), 10)? == IntegerSet::full(10)?)
    }),
    ("multiplicative-odd", || {
        let odd = MultiplicativeSpec::excluding_primes(vec![2]);
        Ok(gen_multiplicative(&odd, 10)?.to_vec() == [1, 3, 5, 7, 9])
    }),
    ("intersect-idempotent", || {
        let a = gen_kfree(2, 100)?;
        Ok(combine(SetOp::Intersect, &a, Some(&a))? == a)
    }),
    ("complement-odd", || {
        let odd = gen_periodic(2, &[1], 6)?;
        Ok(combine(SetOp::Complement, &odd, None)?.to_vec() == [2, 4, 6])
    }),
    ("density-half", || Ok(gen_periodic(2, &[1], 1_000_000)?.density() == 0.5)),
    ("farey-q2", || {
        let a = farey_major_arcs(100, 2.0)?;
        Ok(a.arc_count() == 2 && close(a.measure(), 0.08, 1e-15) && a.contains(0.5))
    }),
    ("farey-q1", || {
        let a = farey_major_arcs(100, 1.0)?;
        Ok(a.arc_count() == 1 && close(a.measure(), 0.02, 1e-15) && a.contains(0.995))
    }),
    ("sequence-zero", || {
        let a = sequence_major_arcs(&[Frequency::zero()], 100, 1.0)?;
        Ok(a.arc_count() == 1
            && close(a.measure(), 0.02, 1e-15)
            && a.contains(0.0)
            && a.contains(0.991)
            && !a.contains(0.011))
    }),
    ("beatty-spectrum-q0", || Ok(beatty_spectrum(2, 0.0) == [Frequency::zero()])),
    ("complement-full", || Ok(ArcSystem::full().complement().is_empty())),
    ("complement-arc", || {
        let c = ArcSystem::from_intervals([(0.1, 0.3)]).complement();
        Ok(c.intervals() == [(0.0, 0.1), (0.3, 1.0)])
    }),
    ("intersect-full", || {
        let a = ArcSystem::from_intervals([(0.1, 0.3), (0.9, 1.05)]);
        Ok(intersect_arcs(&a, &ArcSystem::full()) == a)
    }),
    ("intersect-disjoint", || {
        let a = ArcSystem::from_intervals([(0.1, 0.2)]);
        let b = ArcSystem::from_intervals([(0.3, 0.4)]);
        Ok(intersect_arcs(&a, &b).is_empty())
    }),
    ("eval-s-zero", || {
        let a = gen_kfree(2, 1000)?;
        Ok(eval_s(&a, 0.0) == Complex64::new(a.count() as f64, 0.0))
    }),
    ("eval-s-alternating", || Ok(eval_s(&IntegerSet::full(4)?, 0.5).norm() < 1e-15)),
    ("autocorrelation-singleton", || {
        Ok(autocorrelation(&set(1, &[1]))?.values() == [1])
    }),
    ("autocorrelation-interval", || {
        let c = autocorrelation(&IntegerSet::full(500)?)?;
        Ok(c.values().iter().enumerate().all(|(h, &v)| v == 500 - h as u64))
    }),
    ("parseval", || {
        let a = gen_kfree(2, 5000)?;
        let e = energy_on_arcs(&autocorrelation(&a)?, &ArcSystem::full())?;
        Ok(e == a.count() as f64)
    }),
    ("singleton-energy", || {
        let arcs = farey_major_arcs(1000, 5.0)?;
        let e = energy_on_arcs(&autocorrelation(&set(10, &[1]))?, &arcs)?;
        Ok(close(e, arcs.measure(), 1e-12))
    }),
    ("empty-minor-ratio", || {
        let r = minor_arc_ratio(&IntegerSet::empty(1000)?, &farey_major_arcs(1000, 3.0)?)?;
        Ok(r == 0.0)
    }),
    ("local-density-odd", || {
        let t = local_densities(&gen_periodic(2, &[1], 1001)?, 2)?;
        Ok(close(t.value(1), 0.5, 1.0 / 1001.0) && t.value(0) == 0.0)
    }),
    ("local-density-full", || {
        let x = 1000;
        let full = IntegerSet::full(x)?;
        let mut ok = true;
        for q in 1..=12 {
            let t = local_densities(&full, q)?;
            ok &= t.values().iter().all(|&v| close(v, 1.0 / q as f64, 1.0 / x as f64));
        }
        Ok(ok)
    }),
    ("arc-coefficient-q1", || {
        let a = gen_kfree(2, 1000)?;
        let c = arc_coefficient(&local_densities(&a, 1)?, 1)?;
        Ok(close(c.re, a.density(), 1e-15) && c.im == 0.0)
    }),
    ("fourier-zero", || {
        let a = gen_kfree(3, 1000)?;
        Ok(close(fourier_coefficient(&a, &Frequency::zero()).re, a.density(), 1e-15))
    }),
    ("full-spectrum", || {
        let full = IntegerSet::full(100_000)?;
        let est = spectrum_scan(&full, &farey_centers(10.0), 0.01)?;
        Ok(est.entries.len() == 1 && est.entries[0].beta == Frequency::zero())
    }),
    ("fq-constant", || {
        let a = gen_kfree(2, 100_000)?;
        let est = spectrum_scan(&a, &farey_centers(5.0), 1e-9)?;
        let g = build_fq(&est, 1)?;
        let rho = a.density();
        Ok(g.len() == 1
            && close(g.eval(7).re, rho, 1e-15)
            && close(besicovitch_distance(&a, &g).powi(2), rho - rho * rho, 1e-12))
    }),
    ("periodic-distance", || {
        let a = gen_periodic(3, &[1, 2], 60_000)?;
        let cands = [Frequency::zero(), Frequency::rational(1, 3), Frequency::rational(2, 3)];
        let g = build_fq(&spectrum_scan(&a, &cands, 1e-12)?, 3)?;
        Ok(besicovitch_distance(&a, &g) < 1e-9)
    }),
    ("wirsing-squarefree", || {
        let w = wirsing_series(&MultiplicativeSpec::kfree(2), 1000)?;
        Ok(w.s1 == 0.0 && w.s2 == 0.0)
    }),
    ("wirsing-odd", || {
        let odd = MultiplicativeSpec::excluding_primes(vec![2]);
        let mut ok = true;
        for p in [2, 3, 100, 10_000] {
            let w = wirsing_series(&odd, p)?;
            ok &= w.s1 == -0.5 && w.s2 == 0.5;
        }
        Ok(ok)
    }),
    ("rep-count-singleton", || {
        let one = set(1, &[1]);
        let r = rep_count(&one, &one)?;
        Ok(r.get(2) == 1 && r.get(0) == 0 && r.get(1) == 0 && r.get(3) == 0)
    }),
    ("main-term-identity", || {
        let full = IntegerSet::full(50)?;
        let c = ArcCoefficients::from_set(&full, 1)?;
        let r = rep_count(&full, &full)?;
        let mut ok = true;
        for n in 1..=50 {
            let m = rational_main_term(&c, &c, n)?;
            ok &= close(m.value, n as f64, 1e-12) && r.get(n) == n - 1;
        }
        Ok(ok)
    }),
    ("full-self-sum", || {
        let full = IntegerSet::full(1000)?;
        let rep = asymptotic_report(&full, &full, |n| n as f64, 100..=200)?;
        Ok(rep.mean >= 0.99 && rep.mean < 1.0)
    }),
];

pub fn run(out: &Sink) -> anyhow::Result<bool> {
    let mut table = Table::new(vec!["check", "status"]);
    let mut all = true;
    for (name, check) in CHECKS {
        let status = match check() {
            Ok(true) => "ok".to_string(),
            Ok(false) => "failed".to_string(),
            Err(e) => format!("error: {e}"),
        };
        all &= status == "ok";
        table.push(vec![Cell::Text(name.to_string()), Cell::Text(status)]);
    }
    let cfg = ExperimentConfig {
        command: "selftest",
        sets: Vec::new(),
        q_schedule: Vec::new(),
        arcs: None,
        params: None,
        output: out.path.as_ref().map(|p| p.display().to_string()),
        format: out.format,
    };
    out.emit(&cfg, &table)?;
    Ok(all)
}
