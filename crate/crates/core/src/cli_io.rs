//! Configuration loading and machine-readable output.
//!
//! Config files are flat `key = value` text (`#` starts a comment) or a flat
//! JSON object with the same keys. Physical parameters are given relative to
//! the noise scale `sigma`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::ConfigError;
use crate::protocol::{ExperimentConfig, SweepResult, WitnessResult};
use crate::rng::RngStream;

/// Recognized config keys, in the order they are applied.
pub const CONFIG_KEYS: [&str; 9] = [
    "sigma",
    "signal_over_sigma",
    "gamma_over_sigma",
    "q",
    "model",
    "scheme",
    "n",
    "seed",
    "batch_policy",
];

/// Header of sweep tables.
pub const SWEEP_HEADER: [&str; 16] = [
    "param", "W_est", "delta_W", "R_est", "q_est", "delta_q", "C_HH", "C_HV", "C_VH", "C_VV",
    "C_DD", "C_AA", "C_LR", "C_RL", "yield", "flags",
];

/// Header of efficiency tables.
pub const EFFICIENCY_HEADER: [&str; 11] = [
    "gamma_over_sigma",
    "eps_AB",
    "eps_A",
    "eps_B",
    "eps",
    "eta_A",
    "eta_B",
    "eta",
    "ill_defined",
    "eps_AB_channel",
    "eps_channel",
];

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

fn parse_f64(field: &str, value: &str) -> Result<f64, ConfigError> {
    let v = value.trim();
    let parsed = match v.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| ConfigError::invalid(field, format!("not a number: `{v}`")))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| ConfigError::invalid(field, format!("not a number: `{v}`")))?;
            num / den
        }
        None => v
            .parse()
            .map_err(|_| ConfigError::invalid(field, format!("not a number: `{v}`")))?,
    };
    if !parsed.is_finite() {
        return Err(ConfigError::invalid(field, format!("not finite: `{v}`")));
    }
    Ok(parsed)
}

/// Parses a non-negative integer, also accepting `2^k`.
pub fn parse_count(field: &str, value: &str) -> Result<u64, ConfigError> {
    let v = value.trim();
    if let Some((base, exp)) = v.split_once('^') {
        let base: u64 = base
            .trim()
            .parse()
            .map_err(|_| ConfigError::invalid(field, format!("bad integer `{v}`")))?;
        let exp: u32 = exp
            .trim()
            .parse()
            .map_err(|_| ConfigError::invalid(field, format!("bad exponent `{v}`")))?;
        return base
            .checked_pow(exp)
            .ok_or_else(|| ConfigError::invalid(field, format!("overflow in `{v}`")));
    }
    v.parse()
        .map_err(|_| ConfigError::invalid(field, format!("bad integer `{v}`")))
}

/// Applies `key → value` entries on top of `base`, then validates.
pub fn apply_entries(
    base: ExperimentConfig,
    entries: &BTreeMap<String, String>,
) -> Result<ExperimentConfig, ConfigError> {
    for key in entries.keys() {
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(key.clone()));
        }
    }
    let mut c = base;
    let gamma_ratio = c.noise.gamma / c.noise.sigma;
    let signal_ratio = c.noise.signal / c.noise.sigma;
    if let Some(v) = entries.get("sigma") {
        c.noise.sigma = parse_f64("sigma", v)?;
        c.noise.gamma = gamma_ratio * c.noise.sigma;
        c.noise.signal = signal_ratio * c.noise.sigma;
    }
    if let Some(v) = entries.get("signal_over_sigma") {
        c.noise.signal = parse_f64("signal_over_sigma", v)? * c.noise.sigma;
    }
    if let Some(v) = entries.get("gamma_over_sigma") {
        c.noise.gamma = parse_f64("gamma_over_sigma", v)? * c.noise.sigma;
    }
    if let Some(v) = entries.get("q") {
        c.model.q = parse_f64("q", v)?;
    }
    if let Some(v) = entries.get("model") {
        c.model.kind = v.parse()?;
    }
    if let Some(v) = entries.get("scheme") {
        c.scheme = v.parse()?;
    }
    if let Some(v) = entries.get("n") {
        c.n = parse_count("n", v)?;
    }
    if let Some(v) = entries.get("seed") {
        c.master_seed = parse_count("seed", v)?;
    }
    if let Some(v) = entries.get("batch_policy") {
        c.batch_policy = v.parse()?;
    }
    c.validate()?;
    Ok(c)
}

fn json_entries(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        message: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| ConfigError::Syntax {
        line: 1,
        message: "expected a JSON object".into(),
    })?;
    obj.iter()
        .map(|(k, v)| {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                other => {
                    return Err(ConfigError::invalid(
                        normalize_key(k),
                        format!("unsupported value {other}"),
                    ))
                }
            };
            Ok((normalize_key(k), s))
        })
        .collect()
}

fn key_value_entries(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| ConfigError::Syntax {
                line: idx + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
        let v = v.trim().trim_matches('"');
        out.insert(normalize_key(k), v.to_string());
    }
    Ok(out)
}

/// Parses config text in either accepted format into raw entries.
pub fn parse_config_entries(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    if text.trim_start().starts_with('{') {
        json_entries(text)
    } else {
        key_value_entries(text)
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    apply_entries(ExperimentConfig::default(), &parse_config_entries(text)?)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parses a grid given as a comma list (`0, 0.2, 1/3`) or an inclusive range
/// `start:stop:step`.
pub fn parse_grid(field: &str, text: &str) -> Result<Vec<f64>, ConfigError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ConfigError::invalid(field, "grid is empty"));
    }
    if t.contains(':') {
        let parts: Vec<&str> = t.split(':').collect();
        if parts.len() != 3 {
            return Err(ConfigError::invalid(field, "range must be start:stop:step"));
        }
        let (start, stop, step) = (
            parse_f64(field, parts[0])?,
            parse_f64(field, parts[1])?,
            parse_f64(field, parts[2])?,
        );
        if step <= 0.0 || stop < start {
            return Err(ConfigError::invalid(
                field,
                "range needs step > 0 and stop >= start",
            ));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // Rounded so 0.1-style steps give clean grid values.
        return Ok((0..count)
            .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
            .collect());
    }
    t.split(',').map(|s| parse_f64(field, s)).collect()
}

fn fmt_f64(x: f64) -> String {
    // Shortest representation that round-trips exactly.
    format!("{x}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn flags_field(result: &WitnessResult) -> String {
    result
        .flags()
        .iter()
        .map(|f| f.as_str())
        .collect::<Vec<_>>()
        .join(";")
}

fn sweep_row(param: f64, r: &WitnessResult) -> Vec<String> {
    let e = &r.estimates;
    let mut row = vec![
        fmt_f64(param),
        fmt_opt(e.w_est),
        fmt_opt(e.delta_w),
        fmt_opt(e.r_est),
        fmt_opt(e.q_est),
        fmt_opt(e.delta_q),
    ];
    row.extend(r.counts.to_array().iter().map(|c| c.to_string()));
    row.push(fmt_f64(e.coincidence_yield));
    row.push(flags_field(r));
    row
}

fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv")
}

/// Sweep table with the fixed column set.
pub fn sweep_csv(sweep: &SweepResult) -> String {
    write_csv(
        &SWEEP_HEADER,
        sweep.rows.iter().map(|r| sweep_row(r.param, &r.result)),
    )
}

/// Single result as a one-row sweep table; `param` is the singlet weight.
pub fn result_csv(result: &WitnessResult) -> String {
    write_csv(&SWEEP_HEADER, [sweep_row(result.config.model.q, result)])
}

/// One efficiency row per threshold; `eta` fields are empty when undefined.
pub fn efficiency_csv(sweep: &SweepResult) -> String {
    let rows = sweep.rows.iter().map(|row| {
        let mut out = vec![fmt_f64(row.param)];
        match &row.result.efficiencies {
            Some(eff) => {
                let t = &eff.true_eff;
                out.extend([t.eps_ab, t.eps_a, t.eps_b, t.eps].map(fmt_f64));
                out.extend(match &eff.measured {
                    Some(m) => [m.eta_a, m.eta_b, m.eta].map(fmt_f64),
                    None => [String::new(), String::new(), String::new()],
                });
                out.push(eff.ill_defined.to_string());
                out.push(fmt_f64(eff.channel.eps_ab));
                out.push(fmt_f64(eff.channel.eps));
            }
            None => out.extend(std::iter::repeat_n(
                String::new(),
                EFFICIENCY_HEADER.len() - 1,
            )),
        }
        out
    });
    write_csv(&EFFICIENCY_HEADER, rows)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable result");
    s.push('\n');
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct StreamEntry {
    pub sweep_index: u64,
    pub label: String,
    pub stream: RngStream,
}

/// Everything needed to regenerate an output file.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub timestamp: String,
    pub master_seed: u64,
    pub config: ExperimentConfig,
    pub grid: Option<Vec<f64>>,
    pub streams: Vec<StreamEntry>,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(
        command: &str,
        config: &ExperimentConfig,
        grid: Option<Vec<f64>>,
        results: &[&WitnessResult],
    ) -> Self {
        let streams = results
            .iter()
            .flat_map(|r| {
                r.batches.iter().map(|b| StreamEntry {
                    sweep_index: r.sweep_index,
                    label: b.label.clone(),
                    stream: b.stream,
                })
            })
            .collect();
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            master_seed: config.master_seed,
            config: *config,
            grid,
            streams,
            duration_seconds: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::Scheme;
    use crate::protocol::{run_witness_experiment, sweep_gamma, BatchPolicy};
    use crate::sampler::MixtureKind;

    #[test]
    fn key_value_and_json_are_interchangeable() {
        let kv = "# comment\nq = 0.6\nmodel = gaussian\nscheme: joint\ngamma-over-sigma = 1.05\nn = 2^12\nseed = 9\nbatch_policy = per-count\n";
        let json = r#"{"q": 0.6, "model": "gaussian", "scheme": "joint", "gamma_over_sigma": 1.05, "n": 4096, "seed": 9, "batch_policy": "per-count"}"#;
        let a = parse_config(kv).unwrap();
        let b = parse_config(json).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.model.kind, MixtureKind::Gaussian);
        assert_eq!(a.scheme, Scheme::Joint);
        assert_eq!(a.n, 4096);
        assert_eq!(a.batch_policy, BatchPolicy::PerCount);
        assert!((a.noise.gamma - 1.05).abs() < 1e-15);
    }

    #[test]
    fn sigma_rescales_ratios() {
        let c = parse_config("sigma = 2\ngamma_over_sigma = 1.1").unwrap();
        assert_eq!(c.noise.sigma, 2.0);
        assert!((c.noise.gamma - 2.2).abs() < 1e-15);
        assert!((c.noise.signal - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn field_level_errors() {
        assert_eq!(
            parse_config("q = lots").unwrap_err(),
            ConfigError::invalid("q", "not a number: `lots`")
        );
        assert!(
            matches!(parse_config("q = 2"), Err(ConfigError::Invalid { field, .. }) if field == "q")
        );
        assert!(
            matches!(parse_config("colour = red"), Err(ConfigError::UnknownKey(k)) if k == "colour")
        );
        assert!(matches!(
            parse_config("just words"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(
            matches!(parse_config("n = 0"), Err(ConfigError::Invalid { field, .. }) if field == "n")
        );
        assert!(matches!(
            parse_config("{\"q\": [1]}"),
            Err(ConfigError::Invalid { .. })
        ));
    }

    #[test]
    fn grids() {
        assert_eq!(
            parse_grid("grid", "0, 0.2,1/3").unwrap(),
            vec![0.0, 0.2, 1.0 / 3.0]
        );
        let g = parse_grid("grid", "0.5:1.25:0.05").unwrap();
        assert_eq!(g.len(), 16);
        assert_eq!(g[1], 0.55);
        assert_eq!(*g.last().unwrap(), 1.25);
        assert!(parse_grid("grid", "").is_err());
        assert!(parse_grid("grid", "1:0:0.1").is_err());
        assert!(parse_grid("grid", "0,x").is_err());
    }

    #[test]
    fn sweep_csv_schema() {
        let config = ExperimentConfig {
            n: 1 << 12,
            ..Default::default()
        };
        let sweep = sweep_gamma(&config, &[1.0, 1.3]).unwrap();
        let csv = sweep_csv(&sweep);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "param,W_est,delta_W,R_est,q_est,delta_q,C_HH,C_HV,C_VH,C_VV,C_DD,C_AA,C_LR,C_RL,yield,flags"
        );
        assert_eq!(lines.clone().count(), 2);
        let last: Vec<&str> = lines.last().unwrap().split(',').collect();
        assert_eq!(last.len(), 16);
        assert_eq!(last[0], "1.3");
        assert!(last[15].contains("degenerate_counts"));

        let eff = efficiency_csv(&sweep);
        let eff_rows: Vec<&str> = eff.lines().collect();
        assert_eq!(eff_rows[0], EFFICIENCY_HEADER.join(","));
        let high: Vec<&str> = eff_rows[2].split(',').collect();
        assert_eq!(&high[5..8], &["", "", ""]);
    }

    #[test]
    fn single_result_csv_and_json() {
        let config = ExperimentConfig {
            n: 1 << 12,
            ..Default::default()
        };
        let r = run_witness_experiment(&config).unwrap();
        assert_eq!(result_csv(&r).lines().count(), 2);
        let json: serde_json::Value = serde_json::from_str(&to_json(&r)).unwrap();
        assert!(json["w_est"].is_number());
        assert!(json["counts"]["C_LR"].is_u64());
        assert_eq!(json["batches"].as_array().unwrap().len(), 3);
        let manifest = RunManifest::new("run", &config, None, &[&r]);
        assert_eq!(manifest.streams.len(), 3);
    }
}
