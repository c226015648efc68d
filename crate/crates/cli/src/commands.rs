// Copyright 2026 The csfq Authors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use csfq_core::config::DeviceConfig;
use csfq_core::fit::{fit as run_fit, FitOptions, FitParam, TransitionObservation};
use csfq_core::loss::{
    calibrate_qp, effective_bath_temperature, half_plateau_temperature, nbar, purcell_rate,
    quality_factor, t1_vs_temperature, ThermalConvention,
};
use csfq_core::model::{calibrate_cj, flux_grid, levels, spectrum as solve, transitions, FluxBias};
use csfq_core::spectroscopy::{gibbs_populations, synthesize_trace, TraceConfig};
use csfq_core::timedomain::coherence_relations;

use crate::output::{ghz, sibling, write_csv, write_plot_script};
use crate::{CliError, CliResult, ConfigArg, Outcome};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn cutoff_for(cfg: &DeviceConfig, flag: Option<usize>) -> CliResult<usize> {
    match flag {
        Some(n) if n < 2 => Err(usage(format!("--cutoff must be >= 2, got {n}"))),
        Some(n) => Ok(n),
        None => Ok(cfg.charge_cutoff),
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Reduced flux f = Phi/Phi0 (defaults to the config's sweet spot).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "flux_range")]
    pub flux: Option<f64>,
    /// Sweep LO..HI over N evenly spaced points.
    #[arg(long, num_args = 3, value_names = ["LO", "HI", "N"], allow_hyphen_values = true)]
    pub flux_range: Option<Vec<String>>,
    /// Number of excited levels K (columns E1..EK).
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Charge-basis cutoff N (defaults to the config value).
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Write the table here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Also write a matplotlib script for the CSV.
    #[arg(long, value_name = "PATH", requires = "csv")]
    pub plot_script: Option<PathBuf>,
}

fn parse_range(v: &[String]) -> CliResult<(f64, f64, usize)> {
    let num = |s: &String| {
        s.parse::<f64>()
            .map_err(|_| usage(format!("--flux-range: '{s}' is not a number")))
    };
    let lo = num(&v[0])?;
    let hi = num(&v[1])?;
    let n = v[2]
        .parse::<usize>()
        .map_err(|_| usage(format!("--flux-range: point count '{}' is not a positive integer", v[2])))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(usage(format!("--flux-range: need LO < HI, got {lo} {hi}")));
    }
    if n < 2 {
        return Err(usage(format!("--flux-range: need N >= 2, got {n}")));
    }
    Ok((lo, hi, n))
}

pub fn spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> CliResult<Outcome> {
    if a.levels == 0 {
        return Err(usage("--levels must be >= 1"));
    }
    let loaded = a.config.load()?;
    let cfg = &loaded.config;
    let params = cfg.to_params()?;
    let cutoff = cutoff_for(cfg, a.cutoff)?;
    let grid = match &a.flux_range {
        Some(v) => {
            let (lo, hi, n) = parse_range(v)?;
            flux_grid(lo, hi, n)?
        }
        None => vec![FluxBias(a.flux.unwrap_or(cfg.reference.sweet_spot_flux))],
    };
    if grid.iter().any(|f| !f.0.is_finite()) {
        return Err(usage("--flux must be finite"));
    }
    let spectra = csfq_core::model::sweep(&params, &grid, a.levels + 1, cutoff)?;

    let mut header = vec!["flux".to_string()];
    header.extend((1..=a.levels).map(|k| format!("E{k}_GHz")));
    header.push("converged".into());
    let rows: Vec<Vec<String>> = spectra
        .iter()
        .map(|s| {
            let mut r = vec![format!("{:.6}", s.flux.0)];
            r.extend(s.levels[1..].iter().map(|&e| ghz(e)));
            r.push(s.converged.to_string());
            r
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();

    let mut outcome = Outcome {
        config_hash: loaded.hash,
        ..Outcome::default()
    };
    match &a.csv {
        Some(path) => {
            write_csv(path, &header, &rows)?;
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
            outcome.outputs.push(path.clone());
            if let Some(script) = &a.plot_script {
                write_plot_script(script, path, "levels vs flux", false)?;
                outcome.outputs.push(script.clone());
            }
        }
        None => {
            writeln!(out, "{}", header.join(","))?;
            for r in &rows {
                writeln!(out, "{}", r.join(","))?;
            }
        }
    }
    if spectra.iter().any(|s| !s.converged) {
        eprintln!("warning: some rows are not converged in the charge cutoff; raise --cutoff");
    }
    Ok(outcome)
}

#[derive(Debug, Clone, Args)]
pub struct SpectroscopyArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Reduced flux (defaults to the config's spectroscopy flux).
    #[arg(long, allow_hyphen_values = true)]
    pub flux: Option<f64>,
    /// Effective qubit temperature (K).
    #[arg(long, value_name = "KELVIN")]
    pub teff: f64,
    /// Highest multi-photon order.
    #[arg(long, default_value_t = 2)]
    pub order: u32,
    /// Levels included in the thermal state and transition set.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Trace CSV (freq_GHz, amplitude).
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Peak-table CSV (defaults to <csv stem>.peaks.csv next to --csv).
    #[arg(long, value_name = "PATH")]
    pub peaks: Option<PathBuf>,
    /// Scan window (GHz).
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    pub window_ghz: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1501)]
    pub points: usize,
    #[arg(long, value_name = "PATH", requires = "csv")]
    pub plot_script: Option<PathBuf>,
}

const PEAK_HEADER: [&str; 6] = ["center_GHz", "width_GHz", "height", "i", "j", "order"];

pub fn spectroscopy(a: &SpectroscopyArgs, out: &mut dyn Write) -> CliResult<Outcome> {
    if a.order == 0 {
        return Err(usage("--order must be >= 1"));
    }
    if a.levels < 2 {
        return Err(usage("--levels must be >= 2"));
    }
    if !(a.teff >= 0.0 && a.teff.is_finite()) {
        return Err(usage(format!("--teff must be a temperature >= 0 K, got {}", a.teff)));
    }
    let loaded = a.config.load()?;
    let cfg = &loaded.config;
    let params = cfg.to_params()?;
    let cutoff = cutoff_for(cfg, a.cutoff)?;
    let flux = FluxBias(a.flux.unwrap_or(cfg.reference.spectroscopy_flux));

    let mut tc = TraceConfig {
        n_points: a.points,
        ..TraceConfig::default()
    };
    if let Some(w) = &a.window_ghz {
        tc.f_lo = w[0] * 1e9;
        tc.f_hi = w[1] * 1e9;
    }
    let spec = solve(&params, flux, a.levels, cutoff)?;
    let set = transitions(&spec, a.order);
    let state = gibbs_populations(&spec, a.teff, a.levels)?;
    let trace = synthesize_trace(&set, &state, &tc)?;

    let peak_rows: Vec<Vec<String>> = trace
        .peaks
        .iter()
        .map(|p| {
            vec![
                ghz(p.center),
                ghz(p.width),
                format!("{:.9e}", p.height),
                p.i.to_string(),
                p.j.to_string(),
                p.order.to_string(),
            ]
        })
        .collect();

    writeln!(out, "flux {:.6}, T_eff {} K, populations {}", flux.0, a.teff,
        state.populations.iter().map(|p| format!("{p:.6}")).collect::<Vec<_>>().join(" "))?;
    writeln!(out, "{}", PEAK_HEADER.join(","))?;
    for r in &peak_rows {
        writeln!(out, "{}", r.join(","))?;
    }

    let mut outcome = Outcome {
        config_hash: loaded.hash,
        ..Outcome::default()
    };
    if let Some(path) = &a.csv {
        let rows: Vec<Vec<String>> = trace
            .freqs
            .iter()
            .zip(&trace.amplitude)
            .map(|(f, y)| vec![ghz(*f), format!("{y:.9e}")])
            .collect();
        write_csv(path, &["freq_GHz", "amplitude"], &rows)?;
        outcome.outputs.push(path.clone());
        if let Some(script) = &a.plot_script {
            write_plot_script(script, path, "synthetic spectroscopy", false)?;
            outcome.outputs.push(script.clone());
        }
    }
    let peak_path = a.peaks.clone().or_else(|| a.csv.as_deref().map(|p| sibling(p, "peaks")));
    if let Some(path) = peak_path {
        write_csv(&path, &PEAK_HEADER, &peak_rows)?;
        outcome.outputs.push(path);
    }
    Ok(outcome)
}

#[derive(Debug, Clone, Args)]
pub struct T1TempArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Low-temperature plateau T1 (s). Defaults to the config's measured T1.
    #[arg(long, value_name = "S")]
    pub t1_base: Option<f64>,
    /// T1 at the reference temperature (s).
    #[arg(long, value_name = "S")]
    pub t1_ref: Option<f64>,
    /// Reference temperature (K).
    #[arg(long, value_name = "K")]
    pub temp_ref: Option<f64>,
    /// Superconducting gap (ueV).
    #[arg(long)]
    pub gap_uev: Option<f64>,
    /// Temperature sweep LO HI N (K).
    #[arg(long, num_args = 3, value_names = ["LO", "HI", "N"])]
    pub range: Option<Vec<String>>,
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[arg(long, value_name = "PATH", requires = "csv")]
    pub plot_script: Option<PathBuf>,
}

pub fn t1_temp(a: &T1TempArgs, out: &mut dyn Write) -> CliResult<Outcome> {
    let loaded = a.config.load()?;
    let r = &loaded.config.reference;
    let t1_base = a.t1_base.unwrap_or(r.t1_after_us * 1e-6);
    let t1_ref = a.t1_ref.unwrap_or(r.qp_t1_ref_us * 1e-6);
    let temp_ref = a.temp_ref.unwrap_or(r.qp_temp_ref_k);
    let gap = csfq_core::constants::ev_to_joule(a.gap_uev.unwrap_or(r.gap_uev) * 1e-6);
    let (lo, hi, n) = match &a.range {
        Some(v) => {
            let (lo, hi, n) = parse_range(v).map_err(|e| usage(e.to_string().replace("--flux-range", "--range")))?;
            if lo <= 0.0 {
                return Err(usage(format!("--range: temperatures must be > 0 K, got {lo}")));
            }
            (lo, hi, n)
        }
        None => (0.015, 0.25, 48),
    };
    let model = calibrate_qp(gap, t1_base, t1_ref, temp_ref)?;
    let gamma_intrinsic = 1.0 / t1_base;
    let temps: Vec<f64> = flux_grid(lo, hi, n)?.into_iter().map(|f| f.0).collect();
    let budget = t1_vs_temperature(&model, gamma_intrinsic, &temps);
    let half = half_plateau_temperature(&model, gamma_intrinsic, 1e-3, 10.0)?;

    writeln!(out, "plateau_T1_us = {:.6}", t1_base * 1e6)?;
    writeln!(out, "calibration = {:.6} us at {:.6} K", t1_ref * 1e6, temp_ref)?;
    writeln!(out, "qp_prefactor_per_s = {:.6e}", model.scale)?;
    writeln!(out, "half_plateau_K = {half:.6}")?;

    let rows: Vec<Vec<String>> = budget
        .iter()
        .map(|b| {
            vec![
                format!("{:.6}", b.temp),
                format!("{:.6}", b.t1 * 1e6),
                format!("{:.6e}", b.gamma_qp),
                format!("{:.6e}", b.total_rate()),
            ]
        })
        .collect();
    let header = ["temp_K", "T1_us", "gamma_qp_per_s", "gamma_total_per_s"];
    let mut outcome = Outcome {
        config_hash: loaded.hash,
        ..Outcome::default()
    };
    match &a.csv {
        Some(path) => {
            write_csv(path, &header, &rows)?;
            outcome.outputs.push(path.clone());
            if let Some(script) = &a.plot_script {
                write_plot_script(script, path, "T1 vs temperature", true)?;
                outcome.outputs.push(script.clone());
            }
        }
        None => {
            writeln!(out, "{}", header.join(","))?;
            for r in &rows {
                writeln!(out, "{}", r.join(","))?;
            }
        }
    }
    Ok(outcome)
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Observation CSV with columns flux, i, j, freq_GHz and optional weight.
    #[arg(long, value_name = "PATH")]
    pub data: PathBuf,
    /// Comma-separated free parameters (i0, alpha, cs, cj) or `none`.
    #[arg(long, default_value = "i0,alpha,cs")]
    pub free: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// After fitting, re-solve Cj so w01 at the sweet spot hits this value.
    #[arg(long, value_name = "GHZ")]
    pub calibrate_cj: Option<f64>,
    /// Cj search bracket for --calibrate-cj (fF); defaults to [1, fitted Cj].
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    pub cj_bracket_ff: Option<Vec<f64>>,
    /// Write the config with the fitted qubit parameters here.
    #[arg(long, value_name = "PATH")]
    pub out_config: Option<PathBuf>,
}

fn parse_free(s: &str) -> CliResult<Vec<FitParam>> {
    if s.trim().eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<FitParam>().map_err(|e| usage(format!("--free: {e}"))))
        .collect()
}

/// Reads `flux, i, j, freq_GHz[, weight]`; errors name the file line.
pub fn read_observations(path: &Path) -> CliResult<Vec<TransitionObservation>> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(file);
    let bad = |line: u64, msg: String| CliError::Validation(format!("{}: line {line}: {msg}", path.display()));
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(cf), Some(ci), Some(cj), Some(cfreq)) = (col("flux"), col("i"), col("j"), col("freq_GHz")) else {
        return Err(bad(1, format!("header must contain flux,i,j,freq_GHz, got '{}'", headers.iter().collect::<Vec<_>>().join(","))));
    };
    let cw = col("weight");
    let mut obs = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != headers.len() {
            return Err(bad(line, format!("expected {} fields, found {}", headers.len(), rec.len())));
        }
        let field = |k: usize, name: &str| -> CliResult<f64> {
            let v = &rec[k];
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| bad(line, format!("{name}: '{v}' is not a number")))
        };
        let level = |k: usize, name: &str| -> CliResult<usize> {
            rec[k]
                .parse::<usize>()
                .map_err(|_| bad(line, format!("{name}: '{}' is not a level index", &rec[k])))
        };
        let mut o = TransitionObservation::new(field(cf, "flux")?, level(ci, "i")?, level(cj, "j")?, field(cfreq, "freq_GHz")? * 1e9);
        if let Some(k) = cw {
            o.weight = field(k, "weight")?;
        }
        o.validate().map_err(|e| bad(line, e.to_string()))?;
        obs.push(o);
    }
    if obs.is_empty() {
        return Err(CliError::Validation(format!("{}: no observations", path.display())));
    }
    Ok(obs)
}

pub fn fit(a: &FitArgs, out: &mut dyn Write) -> CliResult<Outcome> {
    let free = parse_free(&a.free)?;
    let loaded = a.config.load()?;
    let cfg = &loaded.config;
    let start = cfg.to_params()?;
    let obs = read_observations(&a.data)?;
    let mut options = FitOptions {
        charge_cutoff: cutoff_for(cfg, a.cutoff)?,
        ..FitOptions::default()
    };
    options.minimize.seed = a.seed;
    options.minimize.restarts = a.restarts;
    let r = run_fit(&obs, &start, &free, &options)?;

    let mut params = r.params;
    if let Some(target) = a.calibrate_cj {
        let (lo, hi) = match &a.cj_bracket_ff {
            Some(b) => (b[0] * 1e-15, b[1] * 1e-15),
            None => (1e-15, params.cj),
        };
        params = calibrate_cj(&params, FluxBias(cfg.reference.sweet_spot_flux), target * 1e9, lo, hi, options.charge_cutoff)?;
    }

    let free_names: Vec<&str> = free.iter().map(|p| p.name()).collect();
    writeln!(out, "free = [{}]", free_names.join(", "))?;
    writeln!(out, "seed = {}", a.seed)?;
    writeln!(out, "converged = {}", r.converged)?;
    writeln!(out, "iterations = {}", r.iterations)?;
    writeln!(out, "residual_rms_MHz = {:.6}", r.residual_rms / 1e6)?;
    writeln!(out, "i0_uA = {:.9}", params.i0 * 1e6)?;
    writeln!(out, "alpha = {:.9}", params.alpha)?;
    writeln!(out, "cs_fF = {:.9}", params.cs * 1e15)?;
    writeln!(out, "cj_fF = {:.9}", params.cj * 1e15)?;
    writeln!(out, "flux,i,j,observed_GHz,model_GHz,error_MHz")?;
    for (o, e) in obs.iter().zip(&r.per_point_errors) {
        writeln!(out, "{:.6},{},{},{},{},{:.6}", o.flux.0, o.i, o.j, ghz(o.freq), ghz(o.freq + e), e / 1e6)?;
    }

    let mut outcome = Outcome {
        config_hash: loaded.hash,
        seed: Some(a.seed),
        ..Outcome::default()
    };
    if let Some(path) = &a.out_config {
        cfg.with_qubit(&params).save(path)?;
        outcome.outputs.push(path.clone());
    }
    if !r.converged {
        return Err(CliError::NonConvergence(format!(
            "fit did not converge after {} iterations (residual {:.3} MHz)",
            r.iterations,
            r.residual_rms / 1e6
        )));
    }
    Ok(outcome)
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub config: ConfigArg,
}

pub fn report(a: &ReportArgs, out: &mut dyn Write) -> CliResult<Outcome> {
    let loaded = a.config.load()?;
    let cfg = &loaded.config;
    let r = &cfg.reference;
    let params = cfg.to_params()?;
    let cutoff = cfg.charge_cutoff;

    let w_sweet = levels(&params, FluxBias(r.sweet_spot_flux), 2, cutoff)?[1];
    let w_spec = levels(&params, FluxBias(r.spectroscopy_flux), 2, cutoff)?[1];
    let (t1_before, t1_after) = (r.t1_before_us * 1e-6, r.t1_after_us * 1e-6);
    let (q_before, q_after) = (quality_factor(w_sweet, t1_before), quality_factor(w_sweet, t1_after));

    let cav = &params.cavity;
    let f_cav = cav.omega_cav / (2.0 * std::f64::consts::PI);
    let detuning = 2.0 * std::f64::consts::PI * (f_cav - w_sweet);
    let gamma_p = purcell_rate(cav.g, detuning, cav.kappa)?;
    let t1_purcell = 1.0 / gamma_p;
    let q_purcell = quality_factor(w_sweet, t1_purcell);

    let n_rad = nbar(r.radiator_freq_ghz * 1e9, r.radiator_temp_k);
    let gap = csfq_core::constants::ev_to_joule(r.gap_uev * 1e-6);
    let qp = calibrate_qp(gap, t1_after, r.qp_t1_ref_us * 1e-6, r.qp_temp_ref_k)?;
    let roll_off = half_plateau_temperature(&qp, 1.0 / t1_after, 1e-3, 10.0)?;
    let coh = coherence_relations(t1_after, r.t2_star_after_us * 1e-6, r.t2_echo_after_us * 1e-6)?;
    let us = |t: Option<f64>| t.map_or("lifetime limited".to_string(), |t| format!("{:.2}", t * 1e6));

    writeln!(out, "device: {}", cfg.name)?;
    writeln!(out, "w01 at f = {} (GHz): {:.4}", r.sweet_spot_flux, w_sweet / 1e9)?;
    writeln!(out, "w01 at f = {} (GHz): {:.4}", r.spectroscopy_flux, w_spec / 1e9)?;
    writeln!(out)?;
    writeln!(out, "{:<34}{:>12}{:>12}", "", "before", "after")?;
    writeln!(out, "{:<34}{:>12.3}{:>12.3}", "T1 (us)", t1_before * 1e6, t1_after * 1e6)?;
    writeln!(out, "{:<34}{:>12.3e}{:>12.3e}", "Q = 2 pi f01 T1", q_before, q_after)?;
    writeln!(out, "{:<34}{:>12.3}{:>12.3}", "effective temperature (K)", r.teff_before_k, r.teff_after_k)?;
    writeln!(out)?;
    writeln!(out, "nbar({} GHz, {} K): {:.2}", r.radiator_freq_ghz, r.radiator_temp_k, n_rad)?;
    writeln!(out, "bath temperature for a {}x rate enhancement (K):", r.rate_enhancement)?;
    for conv in [ThermalConvention::Stimulated, ThermalConvention::TwoNbar] {
        let a = effective_bath_temperature(r.rate_enhancement, w_sweet, conv)?;
        let b = effective_bath_temperature(r.rate_enhancement, w_spec, conv)?;
        writeln!(out, "  {:<12} at {:.2} GHz: {:.3}   at {:.2} GHz: {:.3}", conv.to_string(), w_sweet / 1e9, a, w_spec / 1e9, b)?;
    }
    writeln!(out, "resonator Q = w_cav / kappa: {:.0}", cav.quality_factor())?;
    writeln!(out, "Purcell rate (1/s): {:.1}", gamma_p)?;
    writeln!(out, "Purcell T1 limit (us): {:.1}", t1_purcell * 1e6)?;
    writeln!(out, "Purcell-limited Q: {:.3e}", q_purcell)?;
    writeln!(out, "Purcell limit / measured T1: {:.1}", t1_purcell / t1_after)?;
    writeln!(out, "quasiparticle roll-off (T1 at half plateau) (K): {:.4}", roll_off)?;
    writeln!(out, "Tphi from Ramsey (us): {}", us(coh.tphi_star))?;
    writeln!(out, "Tphi from echo (us): {}", us(coh.tphi_echo))?;
    Ok(Outcome {
        config_hash: loaded.hash,
        ..Outcome::default()
    })
}
