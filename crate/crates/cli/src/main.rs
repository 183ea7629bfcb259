//! Batch front end: reproducible verification suites and numeric
//! evaluations with machine-readable reports.
//!
//! Check reports are JSON lines (one instance per line) so regressions diff
//! cleanly; distribution evaluations emit CSV. Exit code 0 means every
//! selected check passed, 1 means a check failed, 2 means the invocation or
//! configuration was invalid.

mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use config::RunConfig;
use csmx_core::propagators::{
    smear_dcausal, smear_dminus, smear_dret, smear_pauli_jordan, RetardedRoute, SmearResult,
};
use csmx_core::smatrix::{
    factorization_defect, matrix_element, smatrix_terms, unitarity_defect, SmearCache,
};
use csmx_core::verify;

#[derive(Parser)]
#[command(name = "csmx", version, about = "Operator-algebra and Green-function verification driver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Representation-layer checks with max-deviation summary.
    Reps(RepsArgs),
    /// Exact symbolic identity suites.
    Verify(VerifyArgs),
    /// Smeared distribution evaluations and numeric checks (CSV).
    Prop(PropArgs),
    /// Scattering-series structure, elements, unitarity, factorization.
    Smatrix(SmatrixArgs),
}

#[derive(Args)]
struct RepsArgs {
    #[command(subcommand)]
    action: RepsAction,
}

#[derive(Subcommand)]
enum RepsAction {
    /// Runs the randomized representation checks and prints max deviations.
    Check {
        #[arg(long, default_value_t = 11)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentityFamily {
    Parity,
    WickDuality,
    TimeOrder,
    ChronoForms,
    Factorization,
    CanonicalForm,
    Vacuum,
    Guards,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity family to check.
    #[arg(long, value_enum)]
    identity: Option<IdentityFamily>,
    /// Largest word or factor count for the exhaustive families.
    #[arg(long, default_value_t = 4)]
    max_n: usize,
    /// Randomized case count where a family mixes exhaustive and random.
    #[arg(long, default_value_t = 1000)]
    randomized: usize,
    #[arg(long, default_value_t = 17)]
    seed: u64,
    /// Include the three-vertex product splits (slower).
    #[arg(long, default_value_t = false)]
    deep: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Distribution {
    Dminus,
    PauliJordan,
    Dret,
    Dcausal,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    Cut,
    Contour,
}

#[derive(Args)]
struct PropArgs {
    #[command(subcommand)]
    action: PropAction,
}

#[derive(Subcommand)]
enum PropAction {
    /// Smears one distribution against a Gaussian test function.
    Eval {
        #[arg(long, value_enum)]
        dist: Distribution,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, value_enum, default_value = "auto")]
        route: RouteArg,
        /// Test-function center `t,x,y,z`.
        #[arg(long, default_value = "2.0,0.0,0.0,0.0", value_delimiter = ',')]
        center: Vec<f64>,
        /// Test-function widths `t,x,y,z`.
        #[arg(long, default_value = "0.3,1.0,1.0,1.0", value_delimiter = ',')]
        widths: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1.0,0.0")]
        amp: Vec<f64>,
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Runs the numeric distribution check suites.
    Verify {
        /// all | green | bounds
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args)]
struct SmatrixArgs {
    #[command(subcommand)]
    action: SmatrixAction,
}

#[derive(Subcommand)]
enum SmatrixAction {
    /// Prints the series terms and their contraction patterns.
    Terms {
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluates a matrix element between configured states.
    Element {
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Symbolic unitarity brackets.
    Unitarity {
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = false)]
        zero_causal: bool,
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Numeric factorization defect with time-separated switching weights.
    Factorize {
        #[arg(long, default_value_t = 2.5)]
        separation: f64,
        #[arg(long, default_value_t = 0.35)]
        width: f64,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
}

struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    fn open(path: &Option<String>) -> Result<Self, String> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(std::fs::File::create(p).map_err(|e| format!("{p}: {e}"))?),
            None => Box::new(std::io::stdout()),
        };
        Ok(Sink { out })
    }

    fn line(&mut self, s: &str) {
        let _ = writeln!(self.out, "{s}");
    }
}

fn emit_report(sink: &mut Sink, rep: &verify::Report) -> bool {
    for i in &rep.instances {
        let line = serde_json::json!({
            "suite": rep.suite,
            "instance": i.id,
            "pass": i.pass,
            "detail": i.detail,
        });
        sink.line(&line.to_string());
    }
    rep.passed()
}

fn run() -> Result<bool, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Reps(args) => match args.action {
            RepsAction::Check { seed, cases, out } => {
                let mut sink = Sink::open(&out)?;
                let dev = verify::reps_deviations(seed, cases).map_err(|e| e.to_string())?;
                sink.line(&serde_json::to_string(&dev).unwrap());
                let rep = verify::reps_suite(seed).map_err(|e| e.to_string())?;
                Ok(emit_report(&mut sink, &rep))
            }
        },
        Command::Verify(args) => {
            let mut sink = Sink::open(&args.out)?;
            let family = args.identity.ok_or_else(|| {
                "an identity family is required; try --identity all".to_string()
            })?;
            let mut ok = true;
            let mut run_family = |f: IdentityFamily| -> Result<(), String> {
                let rep = match f {
                    IdentityFamily::Parity => verify::parity_suite(),
                    IdentityFamily::WickDuality => {
                        verify::wick_duality_suite(args.seed, args.randomized)
                    }
                    IdentityFamily::TimeOrder => verify::time_order_suite(args.max_n.max(2)),
                    IdentityFamily::ChronoForms => verify::chrono_forms_suite(args.max_n.max(2)),
                    IdentityFamily::Factorization => {
                        verify::factorization_suite(args.max_n.max(2), args.deep)
                    }
                    IdentityFamily::CanonicalForm => {
                        verify::canonical_form_suite(args.seed, args.randomized.min(500))
                    }
                    IdentityFamily::Vacuum => verify::vacuum_suite(),
                    IdentityFamily::Guards => verify::guards_suite(),
                    IdentityFamily::All => unreachable!(),
                }
                .map_err(|e| e.to_string())?;
                ok &= emit_report(&mut sink, &rep);
                Ok(())
            };
            match family {
                IdentityFamily::All => {
                    for f in [
                        IdentityFamily::Parity,
                        IdentityFamily::WickDuality,
                        IdentityFamily::TimeOrder,
                        IdentityFamily::ChronoForms,
                        IdentityFamily::Factorization,
                        IdentityFamily::CanonicalForm,
                        IdentityFamily::Vacuum,
                        IdentityFamily::Guards,
                    ] {
                        run_family(f)?;
                    }
                }
                f => run_family(f)?,
            }
            Ok(ok)
        }
        Command::Prop(args) => match args.action {
            PropAction::Eval { dist, mass, route, center, widths, amp, config, out } => {
                let cfg = RunConfig::load(config.as_deref())?;
                let mut sink = Sink::open(&out)?;
                if center.len() != 4 || widths.len() != 4 || amp.len() != 2 {
                    return Err("center and widths need four entries, amp needs two".into());
                }
                let tf = csmx_core::propagators::TestFunction::new(
                    Complex64::new(amp[0], amp[1]),
                    [center[0], center[1], center[2], center[3]],
                    [widths[0], widths[1], widths[2], widths[3]],
                )
                .map_err(|e| e.to_string())?;
                let route = match route {
                    RouteArg::Auto => RetardedRoute::Auto,
                    RouteArg::Cut => RetardedRoute::SharpCut,
                    RouteArg::Contour => RetardedRoute::Contour,
                };
                let q = &cfg.quadrature;
                let (name, r): (&str, SmearResult) = match dist {
                    Distribution::Dminus => {
                        ("dminus", smear_dminus(mass, &tf, q).map_err(|e| e.to_string())?)
                    }
                    Distribution::PauliJordan => {
                        ("pauli-jordan", smear_pauli_jordan(mass, &tf, q).map_err(|e| e.to_string())?)
                    }
                    Distribution::Dret => {
                        ("dret", smear_dret(mass, &tf, q, route).map_err(|e| e.to_string())?)
                    }
                    Distribution::Dcausal => {
                        ("dcausal", smear_dcausal(mass, &tf, q, route).map_err(|e| e.to_string())?)
                    }
                };
                sink.line("distribution,mass,flavor,center,widths,value_re,value_im,error,check,pass");
                sink.line(&format!(
                    "{name},{mass},-,{}|{}|{}|{},{}|{}|{}|{},{:e},{:e},{:e},eval,true",
                    center[0], center[1], center[2], center[3],
                    widths[0], widths[1], widths[2], widths[3],
                    r.value_re, r.value_im, r.error,
                ));
                Ok(true)
            }
            PropAction::Verify { check, config, out } => {
                let cfg = RunConfig::load(config.as_deref())?;
                let mut sink = Sink::open(&out)?;
                sink.line("distribution,mass,flavor,center,widths,value_re,value_im,error,check,pass");
                // Finer selectors filter the Green-function suite by
                // instance prefix.
                let (reports, filter): (Vec<_>, Option<&str>) = match check.as_str() {
                    "green" => (vec![verify::green_function_suite(&cfg.quadrature)], None),
                    "bounds" => (vec![verify::bounds_suite(&cfg.quadrature)], None),
                    "kg" => (
                        vec![verify::green_function_suite(&cfg.quadrature)],
                        Some("fundamental-solution"),
                    ),
                    "splitting" => {
                        (vec![verify::green_function_suite(&cfg.quadrature)], Some("splitting"))
                    }
                    "support" => {
                        (vec![verify::green_function_suite(&cfg.quadrature)], Some("support"))
                    }
                    "routes" => (
                        vec![verify::green_function_suite(&cfg.quadrature)],
                        Some("route-agreement"),
                    ),
                    "microcausality" => (
                        vec![verify::green_function_suite(&cfg.quadrature)],
                        Some("microcausality"),
                    ),
                    "all" => (
                        vec![
                            verify::green_function_suite(&cfg.quadrature),
                            verify::bounds_suite(&cfg.quadrature),
                        ],
                        None,
                    ),
                    other => return Err(format!("unknown check family `{other}`")),
                };
                let mut ok = true;
                let mut emitted = 0usize;
                for rep in reports {
                    let rep = rep.map_err(|e| e.to_string())?;
                    for i in &rep.instances {
                        if let Some(prefix) = filter {
                            if !i.id.starts_with(prefix) {
                                continue;
                            }
                        }
                        ok &= i.pass;
                        emitted += 1;
                        sink.line(&format!(
                            "-,-,-,-,-,-,-,-,{}:{} ({}),{}",
                            rep.suite,
                            i.id,
                            i.detail.replace(',', ";"),
                            i.pass
                        ));
                    }
                }
                if emitted == 0 {
                    return Err("selector matched no check instances".into());
                }
                Ok(ok)
            }
        },
        Command::Smatrix(args) => match args.action {
            SmatrixAction::Terms { order, config, out } => {
                let cfg = RunConfig::load(config.as_deref())?;
                let mut sink = Sink::open(&out)?;
                if order >= 3 {
                    eprintln!(
                        "expanding order {order}: about {} component assignments times the pair patterns",
                        16u64.pow(order as u32)
                    );
                }
                let series = smatrix_terms(order, cfg.mass(), &cfg.charge(), cfg.order_cap)
                    .map_err(|e| e.to_string())?;
                for t in &series.terms {
                    let line = serde_json::json!({
                        "order": t.order,
                        "wick_class": format!("{:?}", t.class),
                        "terms": t.expr.len(),
                        "symbolic_hash": format!("{:016x}", t.expr.symbolic_hash()),
                    });
                    sink.line(&line.to_string());
                }
                Ok(true)
            }
            SmatrixAction::Element { config, order, out } => {
                let cfg = RunConfig::load(Some(&config))?;
                let mut sink = Sink::open(&out)?;
                let h3 = cfg
                    .switching
                    .as_ref()
                    .ok_or("config needs a `switching` block")?
                    .build()?;
                let bra = cfg.bra.clone().unwrap_or_default().build()?;
                let ket = cfg.ket.clone().unwrap_or_default().build()?;
                let series = smatrix_terms(order, cfg.mass(), &cfg.charge(), cfg.order_cap)
                    .map_err(|e| e.to_string())?;
                let mut cache = SmearCache::new();
                let me = matrix_element(&bra, &ket, &series, &h3, order, &cfg.quadrature, &mut cache)
                    .map_err(|e| e.to_string())?;
                for cv in &me.per_class {
                    let line = serde_json::json!({
                        "order": cv.order,
                        "wick_class": format!("{:?}", cv.class),
                        "symbolic_terms": cv.symbolic_terms,
                        "value_re": cv.value.re,
                        "value_im": cv.value.im,
                        "error_est": cv.error,
                    });
                    sink.line(&line.to_string());
                }
                let total = serde_json::json!({
                    "total_re": me.value.re,
                    "total_im": me.value.im,
                    "error_est": me.error,
                });
                sink.line(&total.to_string());
                Ok(true)
            }
            SmatrixAction::Unitarity { order, zero_causal, config, out } => {
                let cfg = RunConfig::load(config.as_deref())?;
                let mut sink = Sink::open(&out)?;
                let h3 = match &cfg.switching {
                    Some(s) => s.build()?,
                    None => default_symmetric_switching(),
                };
                let series = smatrix_terms(
                    order.max(2),
                    cfg.mass(),
                    &cfg.charge(),
                    cfg.order_cap.max(2),
                )
                .map_err(|e| e.to_string())?;
                let rep = unitarity_defect(order, &h3, &series, zero_causal)
                    .map_err(|e| e.to_string())?;
                sink.line(&serde_json::to_string(&rep).unwrap());
                Ok(rep.symbolically_zero)
            }
            SmatrixAction::Factorize { separation, width, order, config, out } => {
                let cfg = RunConfig::load(config.as_deref())?;
                let mut sink = Sink::open(&out)?;
                let (h1, h2) = match (&cfg.switching, &cfg.switching_late) {
                    (Some(a), Some(b)) => (a.build()?, b.build()?),
                    _ => {
                        let g = |c0: f64| {
                            csmx_core::propagators::TestFunction::new(
                                Complex64::ONE,
                                [c0, 0.0, 0.0, 0.0],
                                [width, 1.0, 1.0, 1.0],
                            )
                            .unwrap()
                        };
                        (
                            csmx_core::smatrix::SwitchingFunction::new(
                                Complex64::ONE,
                                g(-separation),
                                g(-separation),
                                g(-separation),
                            ),
                            csmx_core::smatrix::SwitchingFunction::new(
                                Complex64::ONE,
                                g(separation),
                                g(separation),
                                g(separation),
                            ),
                        )
                    }
                };
                let series = smatrix_terms(order, cfg.mass(), &cfg.charge(), cfg.order_cap)
                    .map_err(|e| e.to_string())?;
                let bra = cfg.bra.clone().unwrap_or_default().build()?;
                let ket = cfg.ket.clone().unwrap_or_default().build()?;
                let mut cache = SmearCache::new();
                let rep = factorization_defect(
                    &h1,
                    &h2,
                    order,
                    &bra,
                    &ket,
                    &series,
                    &cfg.quadrature,
                    &mut cache,
                )
                .map_err(|e| e.to_string())?;
                sink.line(&serde_json::to_string(&rep).unwrap());
                Ok(rep.defect_rel < 1e-2)
            }
        },
    }
}

fn default_symmetric_switching() -> csmx_core::smatrix::SwitchingFunction {
    let g = csmx_core::propagators::TestFunction::new(
        Complex64::ONE,
        [0.0, 0.0, 0.0, 0.0],
        [0.5, 1.0, 1.0, 1.0],
    )
    .unwrap();
    csmx_core::smatrix::SwitchingFunction::new(Complex64::ONE, g, g, g)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
