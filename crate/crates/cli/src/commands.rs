//! Subcommand implementations. Each one builds a [`Report`]; rendering and
//! caching happen in `main`.

use std::fs;
use std::io::Read;
use std::sync::OnceLock;

use lefschetz::ideal::inverse::{check_s_generates, gorenstein_hilbert_function, linkage_check, APOLAR_MAX_VARS};
use lefschetz::ideal::{
    exact_graded_piece_dim, hilbert_function, EngineConfig, Generator, IdealSpec, LinearFormSpec,
};
use lefschetz::lefschetz::{probe_power_ideal, slp_test, verify_conjecture, wlp_test, Verdict, WlpReport};
use lefschetz::oracles::{
    binomial_identities, coinvariant_dim_2q, hf_acm_squares, hf_gorenstein_g, hf_square_ci,
    inequality_check, semicontinuity_bounds, socle_degree_j, OracleTable,
};
use lefschetz::poly::elementary_squarefree_sum;
use lefschetz::spec_file::{parse_ideal_spec, to_json};
use serde_json::{json, Value};

use crate::report::{Meta, Report};
use crate::{Command, IdealArgs, Preset, RunArgs};

const ORACLES: [&str; 8] = [
    "hf_square_ci",
    "hf_gorenstein_G",
    "hf_acm_squares",
    "socle_degree_J",
    "coinvariant_dim_2q",
    "inequality",
    "binomial_identities",
    "semicontinuity",
];

fn config(run: &RunArgs) -> Result<EngineConfig, String> {
    let cfg = EngineConfig {
        seed: run.seed,
        trials: run.trials,
        prime_bits: run.prime_bits,
        coeff_bound: run.coeff_bound,
        ..EngineConfig::default()
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn meta(command: &str, cfg: &EngineConfig) -> Result<Meta, String> {
    Ok(Meta {
        command: command.to_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        primes: cfg.primes().map_err(|e| e.to_string())?,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn err(e: lefschetz::Error) -> String {
    e.to_string()
}

fn preset_spec(preset: Preset, r: Option<usize>) -> Result<IdealSpec, String> {
    let need_r = || r.ok_or_else(|| format!("preset {preset:?} needs --r"));
    Ok(match preset {
        Preset::SquaresCi => IdealSpec::squares(need_r()?),
        Preset::GeneralSquares => {
            let r = need_r()?;
            IdealSpec::general_powers(r, r + 1, 2)
        }
        Preset::Linked => IdealSpec::squares_and_square_of_sum(need_r()?),
        Preset::CubesExample => IdealSpec::monomial_complete_intersection(&[3; 4])
            .with_generator(Generator::PowerOfLinear {
                form: LinearFormSpec::General,
                exponent: 3,
            })
            .map_err(err)?,
    })
}

/// Stdin is read once; the spec is loaded for both the cache key and the run.
fn stdin_text() -> Result<String, String> {
    static STDIN: OnceLock<Result<String, String>> = OnceLock::new();
    STDIN
        .get_or_init(|| {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map(|_| text)
                .map_err(|e| format!("cannot read spec from stdin: {e}"))
        })
        .clone()
}

/// Reads `--spec` as inline JSON, `-` for stdin, or a file path.
fn load_spec(args: &IdealArgs) -> Result<IdealSpec, String> {
    if let Some(preset) = args.preset {
        return preset_spec(preset, args.r);
    }
    let source = args.spec.as_deref().ok_or("either --spec or --preset is required")?;
    let (name, text) = if source == "-" {
        ("<stdin>".to_string(), stdin_text()?)
    } else if source.trim_start().starts_with('{') {
        ("<inline>".to_string(), source.to_string())
    } else {
        let text = fs::read_to_string(source).map_err(|e| format!("cannot read spec file {source}: {e}"))?;
        (source.to_string(), text)
    };
    parse_ideal_spec(&text).map_err(|e| format!("{name}:{e}"))
}

/// Closed-form Hilbert function for the ideals that have one.
fn oracle_for(spec: &IdealSpec) -> Option<OracleTable> {
    let r = spec.num_vars();
    if *spec == IdealSpec::squares(r) {
        return Some(hf_square_ci(r));
    }
    let squares_and_general = IdealSpec::squares(r)
        .with_generator(Generator::PowerOfLinear {
            form: LinearFormSpec::General,
            exponent: 2,
        })
        .ok()?;
    let linked = [
        IdealSpec::general_powers(r, r + 1, 2),
        IdealSpec::squares_and_square_of_sum(r),
        squares_and_general,
    ];
    if r >= 2 && linked.contains(spec) {
        return hf_acm_squares(r).ok();
    }
    None
}

pub fn cache_key(command: &Command, run: &RunArgs) -> Result<String, String> {
    let cfg = config(run)?;
    let args = match command {
        Command::VerifyHss { r, r_min, r_max, max_r } => json!(["verify-hss", r, r_min, r_max, max_r]),
        Command::Hilbert(a) => json!(["hilbert", to_json(&load_spec(a)?)]),
        Command::Wlp(a) => json!(["wlp", to_json(&load_spec(a)?)]),
        Command::Slp(a) => json!(["slp", to_json(&load_spec(a)?)]),
        Command::Apolar { r } => json!(["apolar", r]),
        Command::Oracle {
            name,
            r,
            r_min,
            r_max,
            q_min,
            q_max,
            n_max,
        } => json!(["oracle", name, r, r_min, r_max, q_min, q_max, n_max]),
        Command::Probe { r, exponents } => json!(["probe", r, exponents]),
        Command::Cache { .. } => json!(["cache"]),
    };
    let settings = json!([cfg.seed, cfg.trials, cfg.prime_bits, cfg.coeff_bound, run.certify]);
    Ok(crate::cache::Cache::key(&format!("{args}\n{settings}")))
}

pub fn run(command: &Command, run: &RunArgs) -> Result<Report, String> {
    let cfg = config(run)?;
    match command {
        Command::VerifyHss { r, r_min, r_max, max_r } => {
            let (lo, hi) = r.map_or((*r_min, *r_max), |r| (r, r));
            verify_hss(lo, hi, *max_r, &cfg)
        }
        Command::Hilbert(a) => hilbert(&load_spec(a)?, run.certify, &cfg),
        Command::Wlp(a) => Ok(wlp_report("wlp", wlp_test(&load_spec(a)?, &cfg).map_err(err)?, &cfg)?),
        Command::Slp(a) => slp(&load_spec(a)?, &cfg),
        Command::Apolar { r } => apolar(*r, &cfg),
        Command::Oracle {
            name,
            r,
            r_min,
            r_max,
            q_min,
            q_max,
            n_max,
        } => {
            let (lo, hi) = r.map_or((*r_min, *r_max), |r| (r, r));
            oracle(name, lo, hi, *q_min, *q_max, *n_max, &cfg)
        }
        Command::Probe { r, exponents } => {
            let rep = probe_power_ideal(*r, exponents.len(), exponents, &cfg).map_err(err)?;
            wlp_report("probe", rep, &cfg)
        }
        Command::Cache { .. } => unreachable!("handled in main"),
    }
}

fn verify_hss(lo: usize, hi: usize, max_r: usize, cfg: &EngineConfig) -> Result<Report, String> {
    if lo < 2 || lo > hi || hi > max_r {
        return Err(format!(
            "need 2 <= r_min <= r_max <= {max_r}, got {lo}..{hi} (raise --max-r to go further)"
        ));
    }
    let mut records = Vec::new();
    let mut all_agree = true;
    let mut all_certified = true;
    let mut offending = Vec::new();
    for r in lo..=hi {
        let v = verify_conjecture(r, cfg).map_err(err)?;
        if !(v.agrees && v.certified) {
            offending.push(r);
        }
        all_agree &= v.agrees;
        all_certified &= v.certified;
        records.push(json!({
            "r": v.r,
            "wlp": v.wlp,
            "expected": v.expected,
            "agrees": v.agrees,
            "certified": v.certified,
            "failing_degrees": v.failing_degrees,
            "hilbert_function": v.hilbert_function,
            "oracle_dims_match": v.oracle_dims_match,
            "residual_q": v.residual.as_ref().map(|c| c.q),
            "residual_dim": v.residual.as_ref().map(|c| c.computed),
            "two_pow_q": v.residual.as_ref().map(|c| c.expected),
        }));
    }
    let verdict = if all_agree && all_certified { "agrees" } else { "disagrees" };
    let column: Vec<&str> = records
        .iter()
        .map(|rec| if rec["wlp"] == "holds" { "H" } else { "F" })
        .collect();
    let mut summary = format!("r = {lo}..{hi}: {}", column.join(","));
    if !offending.is_empty() {
        summary.push_str(&format!("\nnot agreeing or not certified: r = {offending:?}"));
    }
    Ok(Report {
        meta: meta("verify-hss", cfg)?,
        records,
        verdict: verdict.into(),
        certified: all_certified,
        summary: Some(summary),
    })
}

fn hilbert(spec: &IdealSpec, certify: bool, cfg: &EngineConfig) -> Result<Report, String> {
    let h = hilbert_function(spec, cfg).map_err(err)?;
    let oracle = oracle_for(spec);
    let exact: Option<Vec<usize>> = if certify && !spec.has_general_generators() {
        Some(
            (0..=h.values().len())
                .map(|d| exact_graded_piece_dim(spec, d))
                .collect::<Result<_, _>>()
                .map_err(err)?,
        )
    } else {
        None
    };
    let records: Vec<Value> = (0..h.values().len())
        .map(|d| {
            json!({
                "degree": d,
                "dim": h.get(d),
                "oracle": oracle.as_ref().map(|o| o.get(d as i64)),
                "exact": exact.as_ref().map(|e| e[d]),
            })
        })
        .collect();
    let oracle_ok = oracle.as_ref().map(|o| o.matches(&h));
    let exact_ok = exact.as_ref().map(|e| e.iter().enumerate().all(|(d, &v)| v == h.get(d)));
    let verdict = if oracle_ok == Some(false) || exact_ok == Some(false) { "mismatch" } else { "ok" };
    let mut summary = format!("h-vector: {h}");
    if let Some(o) = &oracle {
        summary.push_str(&format!("\noracle {}: {}", o.name, o.source));
    }
    Ok(Report {
        meta: meta("hilbert", cfg)?,
        records,
        verdict: verdict.into(),
        certified: oracle_ok == Some(true) || exact_ok == Some(true),
        summary: Some(summary),
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
    }
}

fn wlp_report(command: &str, rep: WlpReport, cfg: &EngineConfig) -> Result<Report, String> {
    let certified = match oracle_for(&rep.ideal) {
        Some(o) => rep
            .records
            .iter()
            .all(|rec| rec.dim_cur == o.get(rec.i as i64) && rec.dim_prev == o.get(rec.i as i64 - 1)),
        None => false,
    };
    let summary = match rep.verdict {
        Verdict::Holds => "WLP holds".to_string(),
        Verdict::Fails => format!("WLP fails in degree(s) {:?}", rep.failing_degrees),
    };
    Ok(Report {
        meta: meta(command, cfg)?,
        records: rep
            .records
            .iter()
            .map(|r| serde_json::to_value(r).expect("records serialize"))
            .collect(),
        verdict: verdict_name(rep.verdict).into(),
        certified,
        summary: Some(summary),
    })
}

fn slp(spec: &IdealSpec, cfg: &EngineConfig) -> Result<Report, String> {
    let rep = slp_test(spec, cfg).map_err(err)?;
    let records = rep
        .records
        .iter()
        .map(|r| {
            let rec = &r.record;
            json!({
                "k": r.k,
                "i": rec.i,
                "dim_prev": rec.dim_prev,
                "dim_cur": rec.dim_cur,
                "rank": rec.rank,
                "max_possible": rec.max_possible,
                "residual_dim": rec.residual_dim,
                "maximal": rec.maximal,
            })
        })
        .collect();
    let summary = match rep.verdict {
        Verdict::Holds => "SLP holds".to_string(),
        Verdict::Fails => format!("SLP fails at (k, i) = {:?}", rep.failing),
    };
    Ok(Report {
        meta: meta("slp", cfg)?,
        records,
        verdict: verdict_name(rep.verdict).into(),
        certified: false,
        summary: Some(summary),
    })
}

fn apolar(r: usize, cfg: &EngineConfig) -> Result<Report, String> {
    if !(3..=APOLAR_MAX_VARS).contains(&r) {
        return Err(format!(
            "apolar reports run for 3 <= r <= {APOLAR_MAX_VARS} (desk-scale cap), got r = {r}"
        ));
    }
    let g = elementary_squarefree_sum(r, r - 2).map_err(err)?;
    let hg = gorenstein_hilbert_function(&g, cfg).map_err(err)?;
    let hg_oracle = hf_gorenstein_g(r).map_err(err)?;
    let s = check_s_generates(r, cfg).map_err(err)?;
    let link = linkage_check(r, cfg).map_err(err)?;
    let records = (0..=r)
        .map(|d| {
            let sd = s.degrees.get(d);
            let ld = &link.degrees[d];
            json!({
                "degree": d,
                "h_g": hg.get(d),
                "h_g_oracle": hg_oracle.get(d as i64),
                "ann_dim": sd.map(|x| x.ann_dim),
                "s_span_dim": sd.map(|x| x.span_dim),
                "s_new_generators": sd.map(|x| x.new_generators),
                "colon_quotient": ld.colon_quotient,
                "explicit_quotient": ld.explicit_quotient,
                "ci_minus_dual": ld.ci as i64 - ld.gorenstein_dual as i64,
            })
        })
        .collect();
    let hg_ok = hg_oracle.matches(&hg);
    let yes = |b: bool| if b { "confirmed" } else { "NOT confirmed" };
    let summary = format!(
        "H_G = {hg} ({} closed form)\nS inside Ann(g): {}\n<S> = Ann(g) in degrees 0..{}: {}\n\
         (squares : Ann(g)) = (squares, (x_1+...+x_r)^2): {}\ndim R/J = dim R/a - H_G(r - t): {}",
        if hg_ok { "matches" } else { "differs from" },
        yes(s.contained),
        r - 1,
        yes(s.all_equal()),
        yes(link.pieces_equal()),
        yes(link.identity_holds()),
    );
    let all = hg_ok && s.contained && s.all_equal() && link.pieces_equal() && link.identity_holds();
    Ok(Report {
        meta: meta("apolar", cfg)?,
        records,
        verdict: if all { "ok" } else { "mismatch" }.into(),
        certified: hg_ok,
        summary: Some(summary),
    })
}

fn table_record(t: &OracleTable) -> Value {
    json!({"r": t.r, "values": t.values, "source": t.source})
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    name: &str,
    lo: usize,
    hi: usize,
    q_min: Option<u32>,
    q_max: Option<u32>,
    n_max: u32,
    cfg: &EngineConfig,
) -> Result<Report, String> {
    let rs = lo..=hi;
    let mut ok = true;
    let records: Vec<Value> = match name {
        "hf_square_ci" => rs.map(|r| table_record(&hf_square_ci(r))).collect(),
        "hf_gorenstein_G" => rs
            .map(|r| hf_gorenstein_g(r).map(|t| table_record(&t)))
            .collect::<Result<_, _>>()
            .map_err(err)?,
        "hf_acm_squares" => rs
            .map(|r| hf_acm_squares(r).map(|t| table_record(&t)))
            .collect::<Result<_, _>>()
            .map_err(err)?,
        "socle_degree_J" => rs
            .map(|r| socle_degree_j(r).map(|e| json!({"r": r, "socle_degree": e})))
            .collect::<Result<_, _>>()
            .map_err(err)?,
        "coinvariant_dim_2q" => (q_min.unwrap_or(1)..=q_max.unwrap_or(6))
            .map(|q| coinvariant_dim_2q(q).map(|v| json!({"q": q, "value": v})))
            .collect::<Result<_, _>>()
            .map_err(err)?,
        "inequality" => (q_min.unwrap_or(4)..=q_max.unwrap_or(100))
            .map(|q| {
                let t = inequality_check(q)?;
                ok &= t.holds;
                Ok(json!({
                    "q": q,
                    "holds": t.holds,
                    "steps_consistent": t.steps_consistent,
                    "two_pow_q": t.two_pow_q.to_string(),
                    "bound": t.bound.to_string(),
                    "bracket": t.bracket.to_string(),
                }))
            })
            .collect::<Result<_, lefschetz::Error>>()
            .map_err(err)?,
        "binomial_identities" => (1..=n_max)
            .map(|n| {
                let holds = (1..=n).map(|k| binomial_identities(n, k)).collect::<Result<Vec<_>, _>>()?;
                let all = holds.iter().all(|&b| b);
                ok &= all;
                Ok(json!({"n": n, "all_k_hold": all}))
            })
            .collect::<Result<_, lefschetz::Error>>()
            .map_err(err)?,
        "semicontinuity" => rs
            .map(|r| {
                let rep = semicontinuity_bounds(r, cfg)?;
                let closed = hf_acm_squares(r)?;
                let matches = rep.all_equal && rep.h_a.values == closed.values;
                ok &= rep.ordered && matches;
                Ok(json!({
                    "r": r,
                    "h_a": rep.h_a.values,
                    "h_b": rep.h_b.values,
                    "h_c": rep.h_c.values,
                    "ordered": rep.ordered,
                    "all_equal": rep.all_equal,
                    "matches_closed_form": matches,
                }))
            })
            .collect::<Result<_, lefschetz::Error>>()
            .map_err(err)?,
        _ => {
            return Err(format!("unknown oracle {name:?}; available: {}", ORACLES.join(", ")));
        }
    };
    Ok(Report {
        meta: meta("oracle", cfg)?,
        records,
        verdict: if ok { "ok" } else { "mismatch" }.into(),
        certified: ok,
        summary: Some(format!("oracle {name}")),
    })
}
