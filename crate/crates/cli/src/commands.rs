use anyhow::{bail, Context};
use apsets::additive::report_from_table;
use apsets::*;
use serde_json::json;

use crate::config::{self, ExperimentConfig, SetSpec, Sidecar};
use crate::table::{Cell, Sink, Table};
use crate::{MainKind, SetArgs};

fn base_config(command: &'static str, out: &Sink, sets: Vec<SetSpec>) -> ExperimentConfig {
    ExperimentConfig {
        command,
        sets,
        q_schedule: Vec::new(),
        arcs: None,
        params: None,
        output: out.path.as_ref().map(|p| p.display().to_string()),
        format: out.format,
    }
}

pub fn generate(out: &Sink, args: SetArgs) -> anyhow::Result<()> {
    if args.set.is_some() {
        bail!("generate takes --family, not --set");
    }
    let Some(path) = &out.path else {
        bail!("generate needs --output <file>");
    };
    let family = config::family_from_args(&args)?;
    let x = args.x.context("generate needs --x")?;
    let set = family.generate(x)?;
    let side = Sidecar {
        id: family.id(),
        family,
        x,
        count: set.count(),
        density: set.density(),
    };
    std::fs::write(path, set.to_bytes()).with_context(|| format!("writing {}", path.display()))?;
    let mut json = serde_json::to_vec_pretty(&side)?;
    json.push(b'\n');
    let side_path = config::sidecar_path(path);
    std::fs::write(&side_path, &json)
        .with_context(|| format!("writing {}", side_path.display()))?;
    Ok(())
}

enum Arcs {
    Farey,
    Beatty(u64),
}

fn parse_arcs(s: &str) -> anyhow::Result<Arcs> {
    if s == "farey" {
        return Ok(Arcs::Farey);
    }
    if let Some(r) = s.strip_prefix("sequence:beatty") {
        let r: u64 = r
            .parse()
            .with_context(|| format!("bad radicand in --arcs {s}"))?;
        return Ok(Arcs::Beatty(r));
    }
    bail!("unknown arc family {s:?}; expected farey or sequence:beatty<r>")
}

pub fn energy(out: &Sink, args: SetArgs, schedule: Vec<f64>, arcs: String) -> anyhow::Result<()> {
    let family = parse_arcs(&arcs)?;
    if schedule.iter().any(|q| !(q.is_finite() && *q >= 1.0)) {
        bail!("every Q in --q-schedule must be a finite number >= 1");
    }
    let spec = config::spec_from_args(&args)?;
    let loaded = config::load(&spec)?;
    let x = loaded.set.limit();
    let ac = autocorrelation(&loaded.set)?;
    let mut table = Table::new(vec![
        "set-id",
        "x",
        "arc-system-id",
        "Q",
        "measure",
        "energy",
        "ratio",
    ]);
    for &q in &schedule {
        let major = match family {
            Arcs::Farey => farey_major_arcs(x, q)?,
            Arcs::Beatty(r) => beatty_major_arcs(r, x, q)?,
        };
        let e = energy_on_arcs(&ac, &major.complement())?;
        table.push(vec![
            Cell::Text(loaded.id.clone()),
            Cell::Int(x),
            Cell::Text(arcs.clone()),
            Cell::Real(q),
            Cell::Real(major.measure()),
            Cell::Real(e),
            Cell::Real(e / x as f64),
        ]);
    }
    let mut cfg = base_config("energy", out, vec![spec]);
    cfg.q_schedule = schedule;
    cfg.arcs = Some(arcs);
    out.emit(&cfg, &table)
}

pub fn extremality(
    out: &Sink,
    args: SetArgs,
    q_max: u64,
    theoretical_k: Option<u32>,
) -> anyhow::Result<()> {
    let (id, x, curve, sets) = match theoretical_k {
        Some(k) => {
            if args.set.is_some() || args.family.is_some() {
                bail!("--theoretical-kfree does not take a set");
            }
            let curve = extremality_sum_kfree_theoretical(k, q_max)?;
            (format!("kfree{k}-limit"), None, curve, Vec::new())
        }
        None => {
            let spec = config::spec_from_args(&args)?;
            let loaded = config::load(&spec)?;
            let curve = extremality_sum(&loaded.set, q_max)?;
            (loaded.id, Some(loaded.set.limit()), curve, vec![spec])
        }
    };
    let mut table = Table::new(vec![
        "set-id",
        "x",
        "Q",
        "partial_sum",
        "1/rho",
        "gap",
        "last_increment",
    ]);
    for q in 1..=q_max {
        let s = curve.partial_sum(q);
        table.push(vec![
            Cell::Text(id.clone()),
            x.map_or(Cell::Missing, Cell::Int),
            Cell::Int(q),
            Cell::Real(s),
            Cell::Real(curve.target()),
            Cell::Real(curve.target() - s),
            Cell::Real(curve.term(q)),
        ]);
    }
    let mut cfg = base_config("extremality", out, sets);
    cfg.params = Some(json!({ "q_max": q_max, "theoretical_kfree": theoretical_k }));
    out.emit(&cfg, &table)
}

fn parse_candidates(tokens: &[String]) -> anyhow::Result<Vec<Frequency>> {
    let mut v = Vec::new();
    for t in tokens {
        let t = t.trim();
        if let Some(q) = t.strip_prefix("farey:") {
            let q: f64 = q.parse().with_context(|| format!("bad candidate {t:?}"))?;
            v.extend(farey_centers(q));
        } else if let Some(rest) = t.strip_prefix("beatty:") {
            let (r, q) = rest
                .split_once(':')
                .with_context(|| format!("expected beatty:<r>:<Q>, got {t:?}"))?;
            let r: u64 = r.parse().with_context(|| format!("bad candidate {t:?}"))?;
            let q: f64 = q.parse().with_context(|| format!("bad candidate {t:?}"))?;
            v.extend(beatty_spectrum(r, q));
        } else if let Some((a, q)) = t.split_once('/') {
            let a: i64 = a.parse().with_context(|| format!("bad candidate {t:?}"))?;
            let q: u64 = q.parse().with_context(|| format!("bad candidate {t:?}"))?;
            if q == 0 {
                bail!("zero denominator in candidate {t:?}");
            }
            v.push(Frequency::rational(a, q));
        } else {
            let b: f64 = t.parse().with_context(|| format!("bad candidate {t:?}"))?;
            if !b.is_finite() {
                bail!("candidate {t:?} is not finite");
            }
            v.push(Frequency::real(b));
        }
    }
    Ok(v)
}

pub fn spectrum(
    out: &Sink,
    args: SetArgs,
    candidates: Vec<String>,
    threshold: f64,
) -> anyhow::Result<()> {
    let cands = parse_candidates(&candidates)?;
    let spec = config::spec_from_args(&args)?;
    let loaded = config::load(&spec)?;
    let est = spectrum_scan(&loaded.set, &cands, threshold)?;
    let mut table = Table::new(vec!["beta", "re", "im", "modulus"]);
    for e in &est.entries {
        table.push(vec![
            Cell::Real(e.beta.value()),
            Cell::Real(e.coefficient.re),
            Cell::Real(e.coefficient.im),
            Cell::Real(e.modulus),
        ]);
    }
    table.summary = Some(json!({ "mass": est.mass(), "density": loaded.set.density() }));
    let mut cfg = base_config("spectrum", out, vec![spec]);
    cfg.params = Some(json!({ "candidates": candidates, "threshold": threshold }));
    out.emit(&cfg, &table)
}

pub fn represent(
    out: &Sink,
    a: SetArgs,
    b: SetArgs,
    main: MainKind,
    main_q: Option<u64>,
    from: Option<u64>,
    to: Option<u64>,
) -> anyhow::Result<()> {
    if main_q.is_some() && main != MainKind::Rational {
        bail!("--main-q only applies to --main rational");
    }
    let spec_a = config::spec_from_args(&a)?;
    let spec_b = if b.set.is_none() && b.family.is_none() {
        spec_a.clone()
    } else {
        config::spec_from_args(&b)?
    };
    let la = config::load(&spec_a)?;
    let lb = config::load(&spec_b)?;
    let n_max = la.set.limit().min(lb.set.limit());
    let (lo, hi) = (from.unwrap_or(1), to.unwrap_or(n_max));
    if lo > hi {
        bail!("empty window [{lo}, {hi}]");
    }
    let table_r = rep_count(&la.set, &lb.set)?;
    let rep = match main {
        MainKind::Beatty => report_from_table(&table_r, n_max, beatty_main_term, lo..=hi)?,
        MainKind::Identity => report_from_table(&table_r, n_max, |n| n as f64, lo..=hi)?,
        MainKind::Rational => {
            let q = main_q.context("--main rational needs --main-q")?;
            let ca = ArcCoefficients::from_set(&la.set, q)?;
            let cb = ArcCoefficients::from_set(&lb.set, q)?;
            let terms = (lo..=hi)
                .map(|n| rational_main_term(&ca, &cb, n).map(|m| m.value))
                .collect::<apsets::Result<Vec<f64>>>()?;
            report_from_table(&table_r, n_max, |n| terms[(n - lo) as usize], lo..=hi)?
        }
    };
    let mut table = Table::new(vec!["n", "r", "main_term", "ratio"]);
    for row in &rep.rows {
        table.push(vec![
            Cell::Int(row.n),
            Cell::Int(row.r),
            Cell::Real(row.main_term),
            Cell::Real(row.ratio),
        ]);
    }
    table.summary = Some(json!({
        "set_a": la.id,
        "set_b": lb.id,
        "mean": rep.mean,
        "min": rep.min,
        "max": rep.max,
    }));
    let mut cfg = base_config("represent", out, vec![spec_a, spec_b]);
    cfg.params = Some(json!({ "main": main, "main_q": main_q, "from": lo, "to": hi }));
    out.emit(&cfg, &table)
}
