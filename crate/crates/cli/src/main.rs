use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use legendre_az::arith::{parse_rational, Place, Prime};
use legendre_az::energy::{
    az_pairing, energy_arch, energy_nonarch, ArchConfig, PairingConfig, Sampler, DEFAULT_SAMPLES,
};
use legendre_az::explorer::{
    calibrate, fit_rows, scan_pairing_grid, small_point_search, verify_set_inequality, write_csv, Calibration,
    FitConfig, GridSpec, InequalityConfig, ScanConfig,
};
use legendre_az::hybrid::{hybrid_convergence_check, CuspPairing, HybridConfig, Mode};
use legendre_az::lattes::{common_torsion_count, torsion_images, CommonTorsionMode, ExtComplex, ExtRational, LegendreParam};
use legendre_az::local_height::{canonical_height, escape_rate_rational, nonarch_local_height, BerkovichPoint};
use legendre_az::measures::{sample_mu_backward, sample_mu_torsion, DEFAULT_BURN_IN};
use legendre_az::par::Exec;
use legendre_az::Error;

#[derive(Parser)]
#[command(name = "legendre-az", version, about = "Heights, local energies and the height pairing for Legendre curves")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo sample count at the archimedean place.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum HybridMode {
    Potential,
    Measure,
    Energy,
}

#[derive(Clone, Copy, ValueEnum)]
enum CuspArg {
    Same,
    Opposite,
}

#[derive(Args)]
struct GridArgs {
    /// Farey grid: largest numerator.
    #[arg(long)]
    max_num: Option<u64>,
    /// Farey grid: largest denominator.
    #[arg(long)]
    max_den: Option<u64>,
    /// Farey grid: include negative parameters.
    #[arg(long)]
    negatives: bool,
    /// Explicit parameter list, all pairs taken.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    /// Explicit pairs t1:t2.
    #[arg(long, value_delimiter = ',')]
    pairs: Vec<String>,
    /// Also evaluate (t2, t1) for every pair.
    #[arg(long)]
    both_orders: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical height hhat_t(x) with its per-place split.
    Height { t: String, x: String },
    /// One local height lambda_{t,v}(x); place is a prime or "inf".
    LocalHeight {
        t: String,
        x: String,
        #[arg(long, default_value = "inf")]
        place: String,
    },
    /// Local energy E_v(t1, t2); place is a prime or "inf".
    Energy {
        t1: String,
        t2: String,
        #[arg(long, default_value = "inf")]
        place: String,
    },
    /// The height pairing as a sum of local energies.
    Pairing {
        t1: String,
        t2: String,
        /// Also evaluate the archimedean energy from the empirical measure difference.
        #[arg(long)]
        cross_check: bool,
        /// Use torsion quadrature instead of backward orbits.
        #[arg(long)]
        torsion_sampler: bool,
    },
    /// Torsion images of orders 2..=max-order.
    TorsionImages {
        t: String,
        #[arg(long, default_value_t = 4)]
        max_order: u32,
    },
    /// Common torsion images of two curves.
    CommonTorsion {
        t1: String,
        t2: String,
        #[arg(long, default_value_t = 8)]
        max_order: u32,
        /// Match floating roots instead of taking exact gcds.
        #[arg(long)]
        numeric: bool,
    },
    /// Rational points of small summed height; with --eps also checks the small-set inequality.
    SmallPoints {
        t1: String,
        t2: String,
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long, default_value_t = 50)]
        h_max: u64,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        calibration: Option<PathBuf>,
    },
    /// Pairing over a grid: CSV rows and a summary.
    Scan {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        calibration: Option<PathBuf>,
        /// Where to write the summary JSON when the rows go out as CSV.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Lower-envelope fit of the pairing against h(t1, t2); optionally writes a calibration file.
    Fit {
        #[command(flatten)]
        grid: GridArgs,
        /// Write a calibration file here.
        #[arg(long)]
        calibrate: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.1, 1.0])]
        eps: Vec<f64>,
        /// Parameters used for the regularization scale.
        #[arg(long, value_delimiter = ',', default_values_t = ["2".to_string(), "3".into(), "-1".into(), "1/9".into(), "17/5".into(), "1/1000".into()])]
        calibration_params: Vec<String>,
    },
    /// Convergence of rescaled archimedean data toward the hybrid limits as |t| -> 0.
    HybridCheck {
        #[arg(long, value_enum, default_value_t = HybridMode::Potential)]
        mode: HybridMode,
        #[arg(long, value_enum, default_value_t = CuspArg::Same)]
        cusp: CuspArg,
        #[arg(long, default_value_t = 2.0)]
        b: f64,
        /// Moduli |t| of the schedule.
        #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6])]
        schedule: Vec<f64>,
        /// Argument of t along the schedule.
        #[arg(long, default_value_t = 0.0)]
        arg: f64,
        #[arg(long, default_value_t = 5)]
        annuli: usize,
    },
    /// Samples of the archimedean equilibrium measure.
    SampleMu {
        /// Real part of t, or a rational.
        t: String,
        #[arg(long, default_value_t = 0.0)]
        im: f64,
        /// Torsion-tree quadrature of this depth instead of backward orbits.
        #[arg(long)]
        torsion_depth: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_BURN_IN)]
        burn_in: u32,
    },
}

/// Output of one command: a JSON document, optionally with a fixed CSV rendering.
enum Output {
    Json(Value),
    Csv(Vec<u8>, Value),
}

fn param(s: &str) -> Result<LegendreParam, Error> {
    LegendreParam::parse(s)
}

fn place(s: &str) -> Result<Place, Error> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Place::Archimedean);
    }
    let p: u64 = s.parse().map_err(|_| Error::InvalidInput(format!("place must be a prime or inf, got {s}")))?;
    Ok(Place::Finite(Prime::new(p)?))
}

fn real(t: &LegendreParam) -> Complex64 {
    Complex64::new(t.to_f64(), 0.0)
}

fn to_json<T: serde::Serialize>(x: &T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(x)?)
}

impl Cli {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn arch(&self) -> ArchConfig {
        ArchConfig { samples: self.samples, seed: self.seed, tol: self.tol, exec: self.exec(), ..ArchConfig::default() }
    }

    fn grid(&self, g: &GridArgs) -> anyhow::Result<ScanConfig> {
        let spec = if !g.pairs.is_empty() {
            let pairs = g
                .pairs
                .iter()
                .map(|s| {
                    let (a, b) = s.split_once(':').ok_or_else(|| Error::InvalidInput(format!("pair {s} is not t1:t2")))?;
                    Ok((param(a)?, param(b)?))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            GridSpec::Pairs(pairs)
        } else if !g.params.is_empty() {
            GridSpec::Params(g.params.iter().map(|s| param(s)).collect::<Result<_, _>>()?)
        } else {
            GridSpec::Farey { max_num: g.max_num.unwrap_or(3), max_den: g.max_den.unwrap_or(3), negatives: g.negatives }
        };
        let mut cfg = ScanConfig::new(spec);
        cfg.both_orders = g.both_orders;
        cfg.pairing = PairingConfig { arch: self.arch(), cross_check: false };
        cfg.exec = self.exec();
        Ok(cfg)
    }

    fn run(&self) -> anyhow::Result<Output> {
        let exec = self.exec();
        Ok(match &self.cmd {
            Cmd::Height { t, x } => {
                let h = canonical_height(&param(t)?, &ExtRational::parse(x)?, self.tol)?;
                Output::Json(json!({ "t": t, "x": x, "height": h }))
            }
            Cmd::LocalHeight { t, x, place: v } => {
                let (tp, v) = (param(t)?, place(v)?);
                let x = parse_rational(x)?;
                let body = match v {
                    Place::Archimedean => to_json(&escape_rate_rational(real(&tp), &x, self.tol)?)?,
                    Place::Finite(p) => {
                        let iv = nonarch_local_height(&tp, p)?.eval(&BerkovichPoint::Classical(x.clone()))?;
                        json!({ "log_units": [iv.lo.to_string(), iv.hi.to_string()], "lo": iv.lo_f64(), "hi": iv.hi_f64() })
                    }
                };
                Output::Json(json!({ "t": tp.to_string(), "x": x.to_string(), "place": v.to_string(), "value": body }))
            }
            Cmd::Energy { t1, t2, place: v } => {
                let (a, b) = (param(t1)?, param(t2)?);
                let e = match place(v)? {
                    Place::Archimedean => energy_arch(real(&a), real(&b), &self.arch())?,
                    Place::Finite(p) => energy_nonarch(&a, &b, p)?,
                };
                Output::Json(to_json(&e)?)
            }
            Cmd::Pairing { t1, t2, cross_check, torsion_sampler } => {
                let mut arch = self.arch();
                if *torsion_sampler {
                    arch.sampler = Sampler::Torsion;
                    arch.depth = legendre_az::measures::MAX_TORSION_DEPTH;
                }
                let r = az_pairing(&param(t1)?, &param(t2)?, &PairingConfig { arch, cross_check: *cross_check })?;
                Output::Json(to_json(&r)?)
            }
            Cmd::TorsionImages { t, max_order } => Output::Json(torsion_images(&param(t)?, *max_order, exec)?.to_json()),
            Cmd::CommonTorsion { t1, t2, max_order, numeric } => {
                let mode = if *numeric { CommonTorsionMode::Numeric } else { CommonTorsionMode::Exact };
                let c = common_torsion_count(&param(t1)?, &param(t2)?, *max_order, mode, exec)?;
                Output::Json(to_json(&c)?)
            }
            Cmd::SmallPoints { t1, t2, b, h_max, eps, calibration } => {
                let (a, c) = (param(t1)?, param(t2)?);
                let res = small_point_search(&a, &c, *b, *h_max, self.tol.max(1e-9), exec)?;
                let mut v = json!({ "search": res });
                if let Some(eps) = eps {
                    let cal = calibration.as_deref().map(Calibration::load).transpose()?;
                    let cfg = InequalityConfig {
                        pairing: PairingConfig { arch: self.arch(), cross_check: false },
                        h_max: *h_max,
                        tol: self.tol.max(1e-9),
                        exec,
                    };
                    v["inequality"] = to_json(&verify_set_inequality(&a, &c, *eps, *b, cal.as_ref(), &cfg)?)?;
                }
                if self.format == Format::Csv {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["x", "height_sum", "error"])?;
                    for p in &res.points {
                        w.write_record([p.x.clone(), p.height_sum.to_string(), p.error.to_string()])?;
                    }
                    return Ok(Output::Csv(w.into_inner()?, v));
                }
                Output::Json(v)
            }
            Cmd::Scan { grid, calibration, summary } => {
                let cal = calibration.as_deref().map(Calibration::load).transpose()?;
                let res = scan_pairing_grid(&self.grid(grid)?, cal.as_ref())?;
                let s = to_json(&res.summary)?;
                if self.format == Format::Csv {
                    let mut buf = Vec::new();
                    write_csv(&res.rows, &mut buf)?;
                    match summary {
                        Some(p) => std::fs::write(p, serde_json::to_string_pretty(&s)?)?,
                        None => eprintln!("{}", serde_json::to_string_pretty(&s)?),
                    }
                    return Ok(Output::Csv(buf, s));
                }
                Output::Json(to_json(&res)?)
            }
            Cmd::Fit { grid, calibrate: cal_path, eps, calibration_params } => {
                let res = scan_pairing_grid(&self.grid(grid)?, None)?;
                let fit = fit_rows(&res.rows, &FitConfig::default())?;
                let mut v = json!({ "fit": fit, "summary": res.summary });
                if let Some(path) = cal_path {
                    let params: Vec<LegendreParam> = calibration_params.iter().map(|s| param(s)).collect::<Result<_, _>>()?;
                    let cal = calibrate(eps, &params, &self.arch(), 64, Some(res.summary.min_total), Some(fit.beta_hat))?;
                    cal.save(path)?;
                    v["calibration"] = json!({ "path": path.display().to_string(), "sha256": cal.sha256() });
                }
                Output::Json(v)
            }
            Cmd::HybridCheck { mode, cusp, b, schedule, arg, annuli } => {
                let mode = match mode {
                    HybridMode::Potential => Mode::Potential,
                    HybridMode::Measure => Mode::Measure,
                    HybridMode::Energy => Mode::Energy {
                        cusp: match cusp {
                            CuspArg::Same => CuspPairing::Same,
                            CuspArg::Opposite => CuspPairing::Opposite,
                        },
                        b: *b,
                    },
                };
                let ts: Vec<Complex64> = schedule.iter().map(|r| Complex64::from_polar(*r, *arg)).collect();
                let cfg = HybridConfig { arch: self.arch(), annuli: *annuli, ..HybridConfig::default() };
                let table = hybrid_convergence_check(mode, &ts, &cfg)?;
                if self.format == Format::Csv {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for r in &table.rows {
                        w.serialize(r)?;
                    }
                    return Ok(Output::Csv(w.into_inner()?, to_json(&table)?));
                }
                Output::Json(to_json(&table)?)
            }
            Cmd::SampleMu { t, im, torsion_depth, burn_in } => {
                let re = legendre_az::arith::rational_to_f64(&parse_rational(t)?);
                let tc = Complex64::new(re, *im);
                let mu = match torsion_depth {
                    Some(d) => sample_mu_torsion(tc, *d)?,
                    None => sample_mu_backward(tc, self.samples, self.seed, *burn_in, exec)?,
                };
                let pts: Vec<Value> = mu
                    .points
                    .iter()
                    .map(|z| match z {
                        ExtComplex::Finite(z) => json!([z.re, z.im]),
                        ExtComplex::Infinity => json!("inf"),
                    })
                    .collect();
                if self.format == Format::Csv {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["re", "im"])?;
                    for z in &mu.points {
                        match z {
                            ExtComplex::Finite(z) => w.write_record([z.re.to_string(), z.im.to_string()])?,
                            ExtComplex::Infinity => w.write_record(["inf", "inf"])?,
                        }
                    }
                    return Ok(Output::Csv(w.into_inner()?, Value::Null));
                }
                Output::Json(json!({ "measure": mu, "points": pts }))
            }
        })
    }
}

fn emit(cli: &Cli, out: Output) -> anyhow::Result<()> {
    let bytes = match out {
        Output::Csv(bytes, _) if cli.format == Format::Csv => bytes,
        Output::Csv(_, v) | Output::Json(v) => {
            if cli.format == Format::Csv {
                return Err(anyhow!(Error::InvalidInput("this command has no CSV form; use --format json".into())));
            }
            let mut s = serde_json::to_vec_pretty(&v)?;
            s.push(b'\n');
            s
        }
    };
    match &cli.out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.run().and_then(|o| emit(&cli, o)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<Error>().map_or(3, Error::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
