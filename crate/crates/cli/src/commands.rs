//! The four subcommands, as library functions returning their output so
//! tests can call them without a process boundary.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use paramp_core::dynamics::{find_threshold_velocity_numeric, simulate, NumericThreshold, Trace};
use paramp_core::pump::{dc_bias_power_ratio, dc_bias_threshold_field, dc_bias_threshold_power};
use paramp_core::thresholds::threshold_velocity;
use paramp_core::{CavityParams, PumpCavityParams, PumpDrive, ThresholdReport};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{check_axis_applies, AxisScale, DesignConfig, SweepAxis, SweepSpec};
use crate::error::{CliError, CliResult};

/// Q above which `find-threshold` warns about runtime.
pub const SLOW_SEARCH_Q: f64 = 1e5;

pub const TRACE_HEADER: &str = "t_s,q_C,i_A,x_m,v_m_per_s,U_E_J,U_B_J,W_in_J,Q_diss_J";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcThreshold {
    pub e_p_threshold: f64,
    pub p_threshold: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdOutput {
    pub report: ThresholdReport,
    pub dc_bias: Option<DcThreshold>,
}

/// Analytic thresholds for one design. The no-bias power always assumes a
/// pump cavity at the signal frequency with the configured pump Q; with a
/// DC-bias drive the configured pump cavity sits at twice that.
pub fn threshold(
    cavity: &CavityParams,
    pump: &PumpCavityParams,
    drive: &PumpDrive,
) -> CliResult<ThresholdOutput> {
    match *drive {
        PumpDrive::DcBiasField { e_dc, omega_p, .. } => {
            let no_bias_pump = PumpCavityParams::new(cavity.omega(), pump.quality_p())?;
            let report = ThresholdReport::compute(cavity, &no_bias_pump)?;
            let dc = DcThreshold {
                e_p_threshold: dc_bias_threshold_field(cavity, e_dc, omega_p)?,
                p_threshold: dc_bias_threshold_power(cavity, pump, e_dc)?,
                ratio: dc_bias_power_ratio(cavity.mass(), e_dc, cavity.volume())?,
            };
            Ok(ThresholdOutput {
                report,
                dc_bias: Some(dc),
            })
        }
        _ => Ok(ThresholdOutput {
            report: ThresholdReport::compute(cavity, pump)?,
            dc_bias: None,
        }),
    }
}

fn quantity(value: f64, unit: &str) -> Value {
    json!({ "value": value, "unit": unit })
}

impl ThresholdOutput {
    pub fn to_json(&self) -> Value {
        let r = &self.report;
        let mut v = json!({
            "kappa_at_threshold": quantity(r.kappa_at_threshold, "1/s"),
            "gamma": quantity(r.gamma, "1/s"),
            "tau": quantity(r.tau, "s"),
            "v_threshold": quantity(r.v_threshold, "m/s"),
            "K_threshold": quantity(r.k_threshold, "J"),
            "U_threshold": quantity(r.u_threshold, "J"),
            "P_threshold_no_bias": quantity(r.p_threshold_no_bias, "W"),
            "braginsky_U": quantity(r.braginsky_u, "J"),
            "walls_milburn_vc": quantity(r.walls_milburn_vc, "1"),
            "rough_vc": quantity(r.rough_vc, "1"),
        });
        if let Some(dc) = &self.dc_bias {
            v["dc_bias"] = json!({
                "E_p_threshold": quantity(dc.e_p_threshold, "V/m"),
                "P_threshold": quantity(dc.p_threshold, "W"),
                "ratio": quantity(dc.ratio, "1"),
            });
        }
        v
    }
}

pub fn cmd_threshold(design: &DesignConfig) -> CliResult<Value> {
    let out = threshold(&design.cavity, &design.pump, &design.drive)?;
    let mut v = out.to_json();
    if !design.warnings.is_empty() {
        v["warnings"] = json!(design.warnings);
    }
    Ok(v)
}

pub fn run_simulation(design: &DesignConfig) -> CliResult<Trace> {
    let spec = design.require_sim()?;
    let circuit = design.circuit();
    let cfg = spec.to_config(&circuit);
    Ok(simulate(&circuit, &design.drive, &cfg)?)
}

pub fn write_trace_csv<W: Write>(trace: &Trace, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for s in &trace.samples {
        let st = &s.state;
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            st.time, st.charge, st.current, st.plate_x, st.plate_v, s.u_e, s.u_b, s.w_in, s.q_diss
        )?;
    }
    w.flush()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FindThresholdOutput {
    pub analytic: f64,
    pub numeric: NumericThreshold,
    pub rel_diff: f64,
    pub tol: f64,
    pub runtime_s: f64,
}

impl FindThresholdOutput {
    pub fn to_json(&self) -> Value {
        json!({
            "v_threshold_analytic": quantity(self.analytic, "m/s"),
            "v_threshold_numeric": quantity(self.numeric.velocity, "m/s"),
            "rel_diff": quantity(self.rel_diff, "1"),
            "tol": quantity(self.tol, "1"),
            "cycles_simulated": quantity(self.numeric.cycles_simulated as f64, "cycles"),
            "runtime": quantity(self.runtime_s, "s"),
        })
    }
}

pub fn cmd_find_threshold(design: &DesignConfig, tol: f64) -> CliResult<FindThresholdOutput> {
    let spec = design.require_sim()?;
    let circuit = design.circuit();
    let mut cfg = spec.to_config(&circuit);
    if spec.drive_phase.is_none() {
        if let PumpDrive::KinematicVelocity { phase, .. } = design.drive {
            cfg.drive_phase = phase;
        }
    }
    let cav = &design.cavity;
    let analytic = threshold_velocity(cav.omega(), cav.gap(), cav.quality())?;
    let start = Instant::now();
    let numeric = find_threshold_velocity_numeric(&circuit, &cfg, tol)?;
    Ok(FindThresholdOutput {
        analytic,
        numeric,
        rel_diff: ((numeric.velocity - analytic) / analytic).abs(),
        tol,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

/// Command-line values that override the config's sweep section.
#[derive(Debug, Clone, Default)]
pub struct SweepOverrides {
    pub axis: Option<String>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub points: Option<usize>,
    pub log: bool,
}

pub fn resolve_sweep(design: &DesignConfig, o: &SweepOverrides) -> CliResult<SweepSpec> {
    let base = design.sweep;
    let missing = |what: &str| CliError::Validation(format!("sweep needs --{what} or sweep.{what} in the config"));
    let axis = match &o.axis {
        Some(name) => SweepAxis::parse(name)?,
        None => base.map(|b| b.axis).ok_or_else(|| missing("axis"))?,
    };
    check_axis_applies(axis, &design.drive)?;
    let min = o.min.or(base.map(|b| b.min)).ok_or_else(|| missing("min"))?;
    let max = o.max.or(base.map(|b| b.max)).ok_or_else(|| missing("max"))?;
    let points = o.points.or(base.map(|b| b.points)).ok_or_else(|| missing("points"))?;
    let scale = if o.log {
        AxisScale::Log
    } else {
        base.map_or(AxisScale::Linear, |b| b.scale)
    };
    SweepSpec::new(axis, min, max, points, scale)
}

fn apply_axis(
    design: &DesignConfig,
    axis: SweepAxis,
    value: f64,
) -> CliResult<(CavityParams, PumpCavityParams, PumpDrive)> {
    let (mut cav, mut pump, mut drive) = (design.cavity, design.pump, design.drive);
    match axis {
        SweepAxis::Q => {
            cav = cav.with_quality(value)?;
            pump = pump.with_quality(value)?;
        }
        SweepAxis::QSignal => cav = cav.with_quality(value)?,
        SweepAxis::QPump => pump = pump.with_quality(value)?,
        SweepAxis::Mass => cav = cav.with_mass(value)?,
        SweepAxis::Gap => cav = cav.with_gap(value)?,
        SweepAxis::Area => cav = cav.with_area(value)?,
        SweepAxis::EDc => {
            if let PumpDrive::DcBiasField { e_p, omega_p, .. } = drive {
                drive = PumpDrive::dc_bias(value, e_p, omega_p)?;
            }
        }
    }
    Ok((cav, pump, drive))
}

/// One threshold evaluation per grid point, computed in parallel and
/// returned in grid order.
pub fn sweep_rows(design: &DesignConfig, spec: &SweepSpec) -> CliResult<Vec<(f64, ThresholdOutput)>> {
    spec.grid()
        .par_iter()
        .map(|&value| {
            let (cav, pump, drive) = apply_axis(design, spec.axis, value)?;
            threshold(&cav, &pump, &drive).map(|t| (value, t))
        })
        .collect()
}

const SWEEP_COLUMNS: &str = "kappa_at_threshold_per_s,gamma_per_s,tau_s,v_threshold_m_per_s,\
K_threshold_J,U_threshold_J,P_threshold_no_bias_W,braginsky_U_J,walls_milburn_vc,rough_vc";
const SWEEP_DC_COLUMNS: &str = "dc_E_p_threshold_V_per_m,dc_P_threshold_W,dc_ratio";

pub fn write_sweep_csv<W: Write>(
    axis: SweepAxis,
    rows: &[(f64, ThresholdOutput)],
    mut w: W,
) -> std::io::Result<()> {
    let has_dc = rows.iter().any(|r| r.1.dc_bias.is_some());
    write!(w, "{},{SWEEP_COLUMNS}", axis.column())?;
    if has_dc {
        write!(w, ",{SWEEP_DC_COLUMNS}")?;
    }
    writeln!(w)?;
    for (value, t) in rows {
        let r = &t.report;
        let mut fields = vec![
            *value,
            r.kappa_at_threshold,
            r.gamma,
            r.tau,
            r.v_threshold,
            r.k_threshold,
            r.u_threshold,
            r.p_threshold_no_bias,
            r.braginsky_u,
            r.walls_milburn_vc,
            r.rough_vc,
        ];
        if let Some(dc) = &t.dc_bias {
            fields.extend([dc.e_p_threshold, dc.p_threshold, dc.ratio]);
        }
        let line: Vec<String> = fields.iter().map(|x| format!("{x:.16e}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()
}

/// Writes through a sibling temporary file and renames it into place, so
/// a failed run never leaves a partial file behind. `None` means stdout.
pub fn emit<F>(path: Option<&Path>, write: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    let io_err = |p: &Path, e: std::io::Error| CliError::Io(format!("{}: {e}", p.display()));
    match path {
        None => {
            let stdout = std::io::stdout();
            let mut lock = std::io::BufWriter::new(stdout.lock());
            write(&mut lock).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
        Some(p) => {
            let mut tmp = PathBuf::from(p);
            let mut name = p.file_name().unwrap_or_default().to_os_string();
            name.push(".partial");
            tmp.set_file_name(name);
            let result = std::fs::File::create(&tmp).and_then(|f| {
                let mut bw = std::io::BufWriter::new(f);
                write(&mut bw)?;
                bw.into_inner().map_err(|e| e.into_error())?.sync_all()
            });
            match result.and_then(|_| std::fs::rename(&tmp, p)) {
                Ok(()) => Ok(()),
                Err(e) => {
                    let _ = std::fs::remove_file(&tmp);
                    Err(io_err(p, e))
                }
            }
        }
    }
}
