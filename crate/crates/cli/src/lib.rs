//! `djt` command-line front end.
//!
//! Every command renders its whole output into a string first, so the
//! binary only prints and picks the exit code: 0 on success, 1 when a
//! computation failed or a reproduction missed its tolerance, 2 on usage
//! errors.

pub mod error;
pub mod format;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use djt_core::apes::{apes_grid, coupling_from_energies, trivial_points, ApesPoint};
use djt_core::catalog::DefectParams;
use djt_core::pseudospin::{
    e32_sublevel, effective_lz, g_parallel, g_perp, reduced_soc, zeeman_sweep, GTensor, SpinParams,
};
use djt_core::vibronic::{Electronic, DEFAULT_CUTOFF};
use djt_core::{coupling_from_apes, load_catalog, solve, Catalog, JTCoupling};
use serde_json::{json, Value};

pub use error::{CliError, CliResult};
use format::{opt, row, sig6};
use report::{reproduce, Table};

pub const CATALOG_ENV: &str = "PSEUDOSPIN_CATALOG";

const OUTPUT_HELP: &str = "\
Output formats (--format):
  csv   comma separated, floats with 6 significant digits
  json  pretty-printed, floats at full precision
  toml  parameter-file syntax (catalog dump only)

CSV columns:
  catalog dump   key,impurity,polytype,site,pl_center,e_jt,delta_jt,homega,de_soc,
                 lz_o_gs1,lz_o_gs2,nuclear_spin,a_par,a_perp,g0
  reproduce      key,quantity,computed,published,experimental,deviation,tolerance,pass
  solve-djt      quantity,index,value   (p, tunneling_gap, eigenvalue rows)
  apes           qx,qy,e_lower,e_upper
  gtensor        key,sublevel,p,lz_eff,g_par,g_perp,g_par_table_lz,g_par_published,g_par_exp
  zeeman-sweep   b_tesla,level_1..level_n

Units: meV for vibronic energies, GHz for spin levels, MHz for hyperfine
constants, tesla for fields, degrees for --theta.

Exit codes: 0 success, 1 computation failed or tolerance missed, 2 usage error.";

#[derive(Debug, Parser)]
#[command(
    name = "djt",
    version,
    about = "Dynamic Jahn-Teller reduction factors, g tensors and spin spectra of Kramers-doublet defects",
    after_help = OUTPUT_HELP
)]
pub struct Cli {
    /// Parameter file replacing the built-in catalog
    #[arg(long, global = true, env = CATALOG_ENV, value_name = "PATH")]
    pub catalog: Option<PathBuf>,

    /// Output format (default: toml for `catalog dump`, json for
    /// `solve-djt`, csv otherwise)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Toml,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect the defect catalog
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Reproduce the published tables from the catalog inputs
    Reproduce {
        #[arg(value_enum)]
        table: TableArg,
        /// Phonon cutoff n + m <= N
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Diagonalize the vibronic Hamiltonian for explicit APES energies
    SolveDjt(SolveArgs),
    /// Sample both adiabatic potential sheets on a square grid
    Apes(ApesArgs),
    /// g tensor of the GS1 and GS2 sublevels of a catalog defect
    Gtensor {
        /// Catalog key, e.g. 4H:h
        #[arg(long)]
        defect: String,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: usize,
    },
    /// Spin levels over a range of field magnitudes
    ZeemanSweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// Print the active catalog
    Dump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    /// Ham factor and reduced spin-orbit splitting
    Jt,
    /// Parallel and transverse g factors
    G,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Jahn-Teller energy E_JT (meV)
    #[arg(long, allow_negative_numbers = true)]
    pub ejt: f64,
    /// Barrier between minima δ_JT (meV)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    /// Phonon energy ħω (meV)
    #[arg(long, allow_negative_numbers = true)]
    pub homega: f64,
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    pub cutoff: usize,
    /// Number of ground-state coefficients to list
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}

#[derive(Debug, Args)]
pub struct ApesArgs {
    /// Catalog key; alternative to --ejt/--delta/--homega
    #[arg(long, conflicts_with_all = ["ejt", "delta", "homega"])]
    pub defect: Option<String>,
    #[arg(long, requires = "homega", allow_negative_numbers = true)]
    pub ejt: Option<f64>,
    #[arg(long, requires = "ejt", allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, requires = "ejt", allow_negative_numbers = true)]
    pub homega: Option<f64>,
    /// Half width of the grid in dimensionless q (default: twice the
    /// radius of the minima)
    #[arg(long, allow_negative_numbers = true)]
    pub extent: Option<f64>,
    /// Grid points per axis
    #[arg(long, default_value_t = 41)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GSource {
    /// Published g∥ (and reduced SOC) when the catalog has them
    Table,
    /// g0 + 2 p L_z^o with p from the vibronic solver
    Computed,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Catalog key; alternatively give --g-par
    #[arg(long)]
    pub defect: Option<String>,
    /// Explicit GS1 g∥ (overrides the catalog)
    #[arg(long, allow_negative_numbers = true)]
    pub g_par: Option<f64>,
    /// Explicit GS1 g⊥
    #[arg(long, allow_negative_numbers = true)]
    pub g_perp: Option<f64>,
    /// Where catalog g values come from
    #[arg(long, value_enum, default_value_t = GSource::Table)]
    pub g_source: GSource,
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    pub cutoff: usize,
    /// Also include the GS2 manifold above GS1 by the reduced SOC splitting
    #[arg(long, requires = "defect")]
    pub gs2: bool,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub bmin: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub bmax: f64,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    /// Field angle from the c axis (degrees)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Include nuclear hyperfine coupling
    #[arg(long)]
    pub hyperfine: bool,
    /// A∥ (MHz), overrides the catalog
    #[arg(long, requires = "hyperfine", allow_negative_numbers = true)]
    pub a_par: Option<f64>,
    /// A⊥ (MHz), overrides the catalog
    #[arg(long, requires = "hyperfine", allow_negative_numbers = true)]
    pub a_perp: Option<f64>,
    /// Nuclear spin, overrides the catalog
    #[arg(long, requires = "hyperfine")]
    pub nuclear_spin: Option<f64>,
}

/// Rendered command output and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub exit_code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, exit_code: 0 }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn load(path: Option<&PathBuf>) -> CliResult<Catalog> {
    match path {
        None => Ok(Catalog::builtin()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            load_catalog(&text).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
    }
}

fn lookup<'a>(catalog: &'a Catalog, key: &str) -> CliResult<&'a DefectParams> {
    catalog.get(key).ok_or_else(|| {
        usage(format!(
            "unknown defect `{key}`; valid keys: {}",
            catalog.keys().join(", ")
        ))
    })
}

fn check_cutoff(cutoff: usize) -> CliResult<()> {
    if cutoff == 0 {
        return Err(usage("--cutoff must be >= 1"));
    }
    Ok(())
}

fn finite(name: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(usage(format!("--{name} must be finite")))
    }
}

fn pick(format: Option<Format>, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(usage(
            format!("--format {f:?} is not available for this command").to_lowercase(),
        ))
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

pub fn run(cli: Cli) -> CliResult<Output> {
    let catalog = load(cli.catalog.as_ref())?;
    match cli.command {
        Command::Catalog {
            action: CatalogAction::Dump,
        } => catalog_dump(
            &catalog,
            pick(cli.format, Format::Toml, &[Format::Toml, Format::Json, Format::Csv])?,
        ),
        Command::Reproduce { table, cutoff } => {
            check_cutoff(cutoff)?;
            let table = match table {
                TableArg::Jt => Table::Jt,
                TableArg::G => Table::G,
            };
            let fmt = pick(cli.format, Format::Csv, &[Format::Csv, Format::Json])?;
            let rep = reproduce(&catalog, table, cutoff)?;
            let stdout = match fmt {
                Format::Json => pretty(&rep),
                _ => rep.to_csv(),
            };
            Ok(Output {
                stdout,
                exit_code: if rep.pass { 0 } else { 1 },
            })
        }
        Command::SolveDjt(args) => solve_djt(&args, pick(cli.format, Format::Json, &[Format::Csv, Format::Json])?),
        Command::Apes(args) => apes(
            &catalog,
            &args,
            pick(cli.format, Format::Csv, &[Format::Csv, Format::Json])?,
        ),
        Command::Gtensor { defect, cutoff } => {
            check_cutoff(cutoff)?;
            gtensor(
                lookup(&catalog, &defect)?,
                cutoff,
                pick(cli.format, Format::Csv, &[Format::Csv, Format::Json])?,
            )
        }
        Command::ZeemanSweep(args) => sweep(
            &catalog,
            &args,
            pick(cli.format, Format::Csv, &[Format::Csv, Format::Json])?,
        ),
    }
}

fn defect_json(d: &DefectParams) -> Value {
    let r = &d.reference;
    json!({
        "key": d.key(),
        "impurity": d.impurity,
        "polytype": d.polytype.to_string(),
        "site": d.site.to_string(),
        "pl_center": d.pl_center.map(|p| p.to_string()),
        "e_jt": d.e_jt,
        "delta_jt": d.delta_jt,
        "homega": d.homega,
        "de_soc": d.de_soc,
        "lz_o_gs1": d.lz_o_gs1,
        "lz_o_gs2": d.lz_o_gs2,
        "nuclear_spin": d.nuclear_spin,
        "a_par": d.a_par,
        "a_perp": d.a_perp,
        "g0": d.g0,
        "reference": {
            "p": r.p,
            "de_soc_red": r.de_soc_red,
            "exp_de_soc": r.exp_de_soc,
            "lz_eff_gs1": r.lz_eff_gs1,
            "lz_eff_gs2": r.lz_eff_gs2,
            "delta_lz_eff": r.delta_lz_eff,
            "g_par_gs1": r.g_par_gs1,
            "g_par_gs2": r.g_par_gs2,
            "exp_g_par_gs1": r.exp_g_par_gs1,
            "exp_g_par_gs2": r.exp_g_par_gs2,
        },
    })
}

fn catalog_dump(catalog: &Catalog, fmt: Format) -> CliResult<Output> {
    let stdout = match fmt {
        Format::Toml => catalog.to_toml(),
        Format::Json => pretty(&catalog.iter().map(defect_json).collect::<Vec<_>>()),
        Format::Csv => {
            let mut out = row([
                "key",
                "impurity",
                "polytype",
                "site",
                "pl_center",
                "e_jt",
                "delta_jt",
                "homega",
                "de_soc",
                "lz_o_gs1",
                "lz_o_gs2",
                "nuclear_spin",
                "a_par",
                "a_perp",
                "g0",
            ]);
            for d in catalog {
                out += &row([
                    d.key(),
                    d.impurity.clone(),
                    d.polytype.to_string(),
                    d.site.to_string(),
                    d.pl_center.map(|p| p.to_string()).unwrap_or_default(),
                    sig6(d.e_jt),
                    sig6(d.delta_jt),
                    sig6(d.homega),
                    sig6(d.de_soc),
                    sig6(d.lz_o_gs1),
                    sig6(d.lz_o_gs2),
                    sig6(d.nuclear_spin),
                    opt(d.a_par),
                    opt(d.a_perp),
                    sig6(d.g0),
                ]);
            }
            out
        }
    };
    Ok(Output::ok(stdout))
}

fn branch_name(e: Electronic) -> &'static str {
    match e {
        Electronic::Plus => "plus",
        Electronic::Minus => "minus",
    }
}

fn solve_djt(args: &SolveArgs, fmt: Format) -> CliResult<Output> {
    let e_jt = finite("ejt", args.ejt)?;
    let delta = finite("delta", args.delta)?;
    let homega = finite("homega", args.homega)?;
    if e_jt <= 0.0 {
        return Err(usage("--ejt must be > 0"));
    }
    if delta < 0.0 {
        return Err(usage("--delta must be >= 0"));
    }
    if homega <= 0.0 {
        return Err(usage("--homega must be > 0"));
    }
    check_cutoff(args.cutoff)?;

    let c = coupling_from_energies(e_jt, delta, homega)?;
    let sol = solve(&c, args.cutoff)?;
    let stdout = match fmt {
        Format::Json => {
            let coefficients: Vec<Value> = sol.ground_doublet[0]
                .largest_components(args.top)
                .into_iter()
                .map(|(branch, k)| {
                    json!({
                        "branch": branch_name(branch),
                        "n": k.n,
                        "m": k.m,
                        "re": k.amplitude.re,
                        "im": k.amplitude.im,
                        "weight": k.amplitude.norm_sqr(),
                    })
                })
                .collect();
            pretty(&json!({
                "inputs": {"e_jt": e_jt, "delta_jt": delta, "homega": homega, "cutoff": args.cutoff},
                "coupling": {"f": c.f, "g": c.g, "homega": c.homega},
                "eigenvalues": sol.eigenvalues,
                "p": sol.p,
                "tunneling_gap": sol.tunneling_gap,
                "coefficients": coefficients,
            }))
        }
        _ => {
            let mut out = row(["quantity", "index", "value"]);
            out += &row(["p".to_owned(), String::new(), sig6(sol.p)]);
            out += &row(["tunneling_gap".to_owned(), String::new(), sig6(sol.tunneling_gap)]);
            for (i, e) in sol.eigenvalues.iter().enumerate() {
                out += &row(["eigenvalue".to_owned(), i.to_string(), sig6(*e)]);
            }
            out
        }
    };
    Ok(Output::ok(stdout))
}

fn point_json(p: &ApesPoint) -> Value {
    json!({"qx": p.qx, "qy": p.qy, "energy": p.energy})
}

fn apes(catalog: &Catalog, args: &ApesArgs, fmt: Format) -> CliResult<Output> {
    let c: JTCoupling = match (&args.defect, args.ejt, args.homega) {
        (Some(key), _, _) => coupling_from_apes(lookup(catalog, key)?)?,
        (None, Some(ejt), Some(homega)) => {
            let delta = finite("delta", args.delta.unwrap_or(0.0))?;
            let (ejt, homega) = (finite("ejt", ejt)?, finite("homega", homega)?);
            if ejt <= 0.0 || homega <= 0.0 || delta < 0.0 {
                return Err(usage("--ejt and --homega must be > 0, --delta >= 0"));
            }
            coupling_from_energies(ejt, delta, homega)?
        }
        _ => return Err(usage("give --defect or --ejt with --homega")),
    };
    if args.points < 2 {
        return Err(usage("--points must be >= 2"));
    }
    let tp = trivial_points(&c)?;
    let extent = match args.extent {
        Some(e) if e.is_finite() && e > 0.0 => e,
        Some(_) => return Err(usage("--extent must be > 0")),
        None if tp.trough_radius > 0.0 => 2.0 * tp.trough_radius,
        None => 1.0,
    };
    let grid = apes_grid(&c, extent, args.points);
    let stdout = match fmt {
        Format::Json => pretty(&json!({
            "coupling": {"f": c.f, "g": c.g, "homega": c.homega},
            "e_jt": tp.e_jt(),
            "delta_jt": tp.delta_jt(),
            "minima": tp.minima.iter().map(point_json).collect::<Vec<_>>(),
            "barriers": tp.barriers.iter().map(point_json).collect::<Vec<_>>(),
            "grid": grid.iter().map(|g| json!({"qx": g[0], "qy": g[1], "e_lower": g[2], "e_upper": g[3]})).collect::<Vec<_>>(),
        })),
        _ => {
            let mut out = row(["qx", "qy", "e_lower", "e_upper"]);
            for g in &grid {
                out += &row(g.iter().map(|x| sig6(*x)));
            }
            out
        }
    };
    Ok(Output::ok(stdout))
}

fn gtensor(d: &DefectParams, cutoff: usize, fmt: Format) -> CliResult<Output> {
    let p = solve(&coupling_from_apes(d)?, cutoff)?.p;
    let r = &d.reference;
    let mut records = Vec::new();
    for (label, lz_o, lz_table, published, exp) in [
        ("GS1", d.lz_o_gs1, r.lz_eff_gs1, r.g_par_gs1, r.exp_g_par_gs1),
        ("GS2", d.lz_o_gs2, r.lz_eff_gs2, r.g_par_gs2, r.exp_g_par_gs2),
    ] {
        let lz_eff = effective_lz(p, lz_o);
        let kd = e32_sublevel(lz_o)?;
        records.push(json!({
            "key": d.key(),
            "sublevel": label,
            "p": p,
            "lz_eff": lz_eff,
            "g_par": g_parallel(d.g0, lz_eff, 0.5),
            "g_perp": g_perp(&kd, &kd.time_reversed()),
            "g_par_table_lz": lz_table.map(|lz| g_parallel(d.g0, lz, 0.5)),
            "g_par_published": published,
            "g_par_exp": exp,
        }));
    }
    let stdout = match fmt {
        Format::Json => pretty(&records),
        _ => {
            let cols = [
                "key",
                "sublevel",
                "p",
                "lz_eff",
                "g_par",
                "g_perp",
                "g_par_table_lz",
                "g_par_published",
                "g_par_exp",
            ];
            let mut out = row(cols);
            for rec in &records {
                out += &row(cols.iter().map(|c| match &rec[*c] {
                    Value::Number(n) => sig6(n.as_f64().expect("finite number")),
                    Value::String(s) => s.clone(),
                    _ => String::new(),
                }));
            }
            out
        }
    };
    Ok(Output::ok(stdout))
}

/// GS1 (and optionally GS2) g tensors plus the SOC offset for a sweep.
fn sweep_params(catalog: &Catalog, args: &SweepArgs) -> CliResult<SpinParams> {
    let defect = args.defect.as_deref().map(|k| lookup(catalog, k)).transpose()?;
    let mut solved_p = None;
    let mut p_of = |d: &DefectParams| -> CliResult<f64> {
        if let Some(p) = solved_p {
            return Ok(p);
        }
        check_cutoff(args.cutoff)?;
        let p = solve(&coupling_from_apes(d)?, args.cutoff)?.p;
        solved_p = Some(p);
        Ok(p)
    };

    let g_perp = finite("g-perp", args.g_perp.unwrap_or(0.0))?;
    let gs1 = match (args.g_par, defect) {
        (Some(g), _) => GTensor::axial(finite("g-par", g)?, g_perp),
        (None, Some(d)) => {
            let g = match (args.g_source, d.reference.g_par_gs1) {
                (GSource::Table, Some(g)) => g,
                _ => g_parallel(d.g0, effective_lz(p_of(d)?, d.lz_o_gs1), 0.5),
            };
            GTensor::axial(g, g_perp)
        }
        (None, None) => return Err(usage("give --defect or --g-par")),
    };
    let mut params = SpinParams::single(gs1);

    if args.gs2 {
        let d = defect.expect("clap enforces --defect with --gs2");
        let (g, offset) = match (args.g_source, d.reference.g_par_gs2, d.reference.de_soc_red) {
            (GSource::Table, Some(g), Some(red)) => (g, red),
            _ => {
                let p = p_of(d)?;
                (
                    g_parallel(d.g0, effective_lz(p, d.lz_o_gs2), 0.5),
                    reduced_soc(p, d.de_soc),
                )
            }
        };
        params = params.with_upper(GTensor::axial(g, 0.0), offset);
    }

    if args.hyperfine {
        let a_par = args.a_par.or(defect.and_then(|d| d.a_par));
        let a_perp = args.a_perp.or(defect.and_then(|d| d.a_perp));
        let spin = args.nuclear_spin.or(defect.map(|d| d.nuclear_spin));
        match (a_par, a_perp, spin) {
            (Some(a), Some(b), Some(i)) => {
                params = params.with_hyperfine(finite("nuclear-spin", i)?, finite("a-par", a)?, finite("a-perp", b)?)
            }
            _ => {
                return Err(usage(
                    "--hyperfine needs A∥, A⊥ and the nuclear spin from the catalog or --a-par/--a-perp/--nuclear-spin",
                ))
            }
        }
    }
    Ok(params)
}

fn sweep(catalog: &Catalog, args: &SweepArgs, fmt: Format) -> CliResult<Output> {
    let (bmin, bmax) = (finite("bmin", args.bmin)?, finite("bmax", args.bmax)?);
    if bmin < 0.0 || bmax < bmin {
        return Err(usage("need 0 <= --bmin <= --bmax"));
    }
    let theta = finite("theta", args.theta)?;
    if !(0.0..=180.0).contains(&theta) {
        return Err(usage("--theta must lie in [0, 180] degrees"));
    }
    if args.steps == 0 {
        return Err(usage("--steps must be >= 1"));
    }
    let params = sweep_params(catalog, args)?;
    let spectra = zeeman_sweep(&params, bmin, bmax, args.steps, theta.to_radians())?;

    let stdout = match fmt {
        Format::Json => pretty(&json!({
            "g_gs1": params.g,
            "g_gs2": params.g_upper,
            "de_soc_red": params.de_soc_red,
            "nuclear_spin": params.nuclear_spin,
            "a_par": params.a_par,
            "a_perp": params.a_perp,
            "theta_deg": theta,
            "points": spectra.iter().map(|s| json!({
                "b": s.field.magnitude,
                "levels": s.levels,
                "transitions": s.transitions,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let n = spectra.first().map_or(0, |s| s.levels.len());
            let mut out = row(std::iter::once("b_tesla".to_owned()).chain((1..=n).map(|k| format!("level_{k}"))));
            for s in &spectra {
                out += &row(std::iter::once(sig6(s.field.magnitude)).chain(s.levels.iter().map(|x| sig6(*x))));
            }
            out
        }
    };
    Ok(Output::ok(stdout))
}
