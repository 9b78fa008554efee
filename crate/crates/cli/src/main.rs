use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use quantale_core::girard::{find_cyclic_dualizing, girard_reports};
use quantale_core::io::{export_dot, parse, parse_vectors, render_properties, render_report, verify_file, Format};
use quantale_core::io::StructureFile;
use quantale_core::order::UnaryOrderMap;
use quantale_core::ortho::{blocks, check_orthomodular};
use quantale_core::report::{exit_code, LawReport};
use quantale_core::residuation::{check_residuated, lukasiewicz_chain};
use quantale_core::search::{
    confirm_integral_iff_boolean, enumerate_lattices, search_integral_residuation, search_unital_residuation,
    Filters, SearchConfig, DEFAULT_UNITAL_BUDGET,
};
use quantale_core::subspace::{verify_theorem_rn, QuantaleContext, Subspace};
use quantale_core::{zoo, MulTable, ResiduatedStructure, Scalar};

#[derive(Parser)]
#[command(name = "quantale", version, about = "Check residuated, Girard and orthomodular structures")]
struct Cli {
    /// Output style for law reports.
    #[arg(long, value_enum, global = true, default_value_t = OutFormat::Human)]
    format: OutFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Human,
    Machine,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Human => Format::Human,
            OutFormat::Machine => Format::Machine,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every law that applies to a structure file.
    Verify { file: PathBuf },
    /// Print the residua of the file's multiplication and its flags.
    Residuate { file: PathBuf },
    /// Girard certificates and the characterization reports.
    Girard {
        file: PathBuf,
        /// Candidate inversion as comma-separated images, e.g. `2,1,0`.
        #[arg(long)]
        inversion: Option<String>,
    },
    /// Blocks (maximal Boolean subalgebras) of an orthomodular lattice.
    Blocks { file: PathBuf },
    /// Enumerate lattices up to isomorphism.
    Enumerate(EnumerateArgs),
    /// Search residuated multiplications on a lattice.
    SearchResiduation(SearchArgs),
    /// Sampled verification of the subspace quantale of R^n.
    Rn(RnArgs),
    /// One operation on subspaces of R^n.
    RnOp(RnOpArgs),
    /// Print a generated structure file.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Hasse diagram in Graphviz format.
    ExportDot { file: PathBuf },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    max_n: usize,
    #[arg(long)]
    complemented: bool,
    #[arg(long)]
    orthocomplemented: bool,
    #[arg(long)]
    non_distributive: bool,
    /// For every complemented lattice, check that an integral residuation
    /// exists exactly when it is Boolean and that it is then the meet.
    #[arg(long, alias = "confirm-thm2")]
    confirm_boolean_forcing: bool,
    /// Write each listed lattice as a structure file here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchMode {
    Integral,
    Unital,
}

#[derive(Args)]
struct SearchArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    mode: SearchMode,
    /// Node budget (unital mode).
    #[arg(long, default_value_t = DEFAULT_UNITAL_BUDGET)]
    budget: u64,
    /// Write each found multiplication as a structure file here instead of
    /// printing it.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Precision {
    F64,
    F32,
}

#[derive(Args)]
struct RnArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    tol_rank: Option<f64>,
    /// Projector-distance threshold; defaults to 1e-8·√n in double precision.
    #[arg(long)]
    tol_eq: Option<f64>,
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    precision: Precision,
}

#[derive(Clone, Copy, ValueEnum)]
enum RnOp {
    Mul,
    Meet,
    Join,
    Ortho,
    Residuum,
}

#[derive(Args)]
struct RnOpArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, value_enum)]
    op: RnOp,
    /// Spanning vectors, e.g. `1,0;0,1`.
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

#[derive(Subcommand)]
enum GenFamily {
    /// Łukasiewicz chain with `size` elements.
    Lukasiewicz {
        #[arg(long)]
        size: usize,
    },
    /// Boolean algebra on `atoms` atoms with the meet as product.
    Boolean {
        #[arg(long)]
        atoms: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<StructureFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn report(reports: &[LawReport], format: Format) -> i32 {
    print!("{}", render_report(reports, format));
    exit_code(reports)
}

fn run(cli: Cli) -> Result<i32> {
    let format: Format = cli.format.into();
    match cli.command {
        Command::Verify { file } => {
            let v = verify_file(&load(&file)?);
            if format == Format::Human && !v.properties.is_empty() {
                print!("properties\n{}", render_properties(&v.properties));
            }
            Ok(report(&v.laws, format))
        }
        Command::Residuate { file } => residuate(&load(&file)?, format),
        Command::Girard { file, inversion } => girard(&load(&file)?, inversion.as_deref(), format),
        Command::Blocks { file } => {
            let o = load(&file)?.ortholattice()?;
            match blocks(&o) {
                Ok(bs) => {
                    for b in bs {
                        let labels: Vec<&str> = b.iter().map(|&x| o.lattice().label(x)).collect();
                        println!("[{}]", labels.join(", "));
                    }
                    Ok(0)
                }
                Err(_) => Ok(report(&check_orthomodular(&o), format)),
            }
        }
        Command::Enumerate(args) => enumerate(args, format),
        Command::SearchResiduation(args) => search(args, format),
        Command::Rn(args) => match args.precision {
            Precision::F64 => rn::<f64>(&args, format),
            Precision::F32 => rn::<f32>(&args, format),
        },
        Command::RnOp(args) => rn_op(&args),
        Command::Gen { family } => {
            let f = match family {
                GenFamily::Lukasiewicz { size } => {
                    if size < 2 {
                        bail!("a Łukasiewicz chain needs at least 2 elements");
                    }
                    let s = lukasiewicz_chain(size);
                    StructureFile::from_poset(s.poset())
                        .with_mul(s.mul_table())
                        .with_unit(Some(size - 1))
                        .with_dualizing(Some(0))
                }
                GenFamily::Boolean { atoms } => {
                    if atoms > 6 {
                        bail!("at most 6 atoms");
                    }
                    let o = zoo::boolean_ortho(atoms);
                    let l = o.lattice();
                    StructureFile::from_poset(l.poset())
                        .with_ortho(o.ortho_map())
                        .with_mul(&MulTable::meet_of(l))
                        .with_unit(Some(l.top()))
                        .with_dualizing(Some(l.bottom()))
                }
            };
            print!("{}", f.serialize());
            Ok(0)
        }
        Command::ExportDot { file } => {
            print!("{}", export_dot(&load(&file)?.poset()?));
            Ok(0)
        }
    }
}

fn print_table(title: &str, s: &ResiduatedStructure, cell: impl Fn(usize, usize) -> usize) {
    let n = s.len();
    let p = s.poset();
    let width = (0..n).map(|i| p.label(i).chars().count()).max().unwrap_or(1);
    println!("{title}");
    let head: Vec<String> = (0..n).map(|j| format!("{:>width$}", p.label(j))).collect();
    println!("  {:>width$} | {}", "", head.join(" "));
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:>width$}", p.label(cell(i, j)))).collect();
        println!("  {:>width$} | {}", p.label(i), row.join(" "));
    }
}

fn residuate(f: &StructureFile, format: Format) -> Result<i32> {
    let p = f.poset()?;
    let m = f.mul_table()?;
    let r = check_residuated(&p, &m);
    if !r.passed() {
        return Ok(report(&[r], format));
    }
    let s = ResiduatedStructure::new(p, m)?;
    print_table("x ⊙ y (row x, column y)", &s, |x, y| s.mul(x, y));
    print_table("y → z (row y, column z)", &s, |y, z| s.rres(y, z));
    print_table("z ← x (row z, column x)", &s, |z, x| s.lres(z, x));
    let fl = s.flags();
    let unit = fl.unit.map_or("none".to_string(), |e| s.poset().label(e).to_string());
    println!(
        "commutative: {}\nidempotent: {}\nunit: {unit}\nintegral: {}",
        fl.commutative, fl.idempotent, fl.integral
    );
    Ok(report(&[r], format))
}

fn girard(f: &StructureFile, inversion: Option<&str>, format: Format) -> Result<i32> {
    let s = f.residuated()?;
    let candidate = match inversion {
        Some(text) => {
            let map: Vec<usize> = text
                .split(',')
                .map(|x| x.trim().parse().with_context(|| format!("bad inversion entry `{x}`")))
                .collect::<Result<_>>()?;
            if map.len() != s.len() {
                bail!("inversion has {} entries, structure has {}", map.len(), s.len());
            }
            Some(UnaryOrderMap::new(map)?)
        }
        None => None,
    };
    let label = |i: usize| s.poset().label(i).to_string();
    let certs = find_cyclic_dualizing(&s);
    if certs.is_empty() {
        println!("no cyclic dualizing element");
    }
    for c in &certs {
        let neg: Vec<String> = (0..s.len()).map(|x| format!("{}↦{}", label(x), label(c.neg.apply(x)))).collect();
        println!("d = {}, e = {}, negation: {}", label(c.d), label(c.e), neg.join(" "));
    }
    Ok(report(&girard_reports(&s, candidate.as_ref()), format))
}

fn enumerate(args: EnumerateArgs, format: Format) -> Result<i32> {
    let filters = Filters {
        complemented: args.complemented,
        orthocomplemented: args.orthocomplemented,
        non_distributive: args.non_distributive,
    };
    let r = enumerate_lattices(args.max_n, filters)?;
    for (i, c) in r.counts.iter().enumerate() {
        println!("size {}\t{c}", i + 1);
    }
    println!("total\t{}", r.lattices.len());
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir)?;
        for (i, l) in r.lattices.iter().enumerate() {
            let name = format!("lattice-{:02}-{i:05}.struct", l.len());
            std::fs::write(dir.join(name), StructureFile::from_poset(l.poset()).serialize())?;
        }
    }
    if !args.confirm_boolean_forcing {
        return Ok(0);
    }
    let c = confirm_integral_iff_boolean(args.max_n, SearchConfig::default())?;
    let mut reports = c.per_size.clone();
    reports.push(c.report.clone());
    Ok(report(&reports, format))
}

fn search(args: SearchArgs, format: Format) -> Result<i32> {
    let f = load(&args.file)?;
    let r = match args.mode {
        SearchMode::Integral => search_integral_residuation(&f.lattice()?),
        SearchMode::Unital => {
            let o = f.ortholattice()?;
            if !check_orthomodular(&o).iter().all(LawReport::passed) {
                bail!("unital search needs an orthomodular carrier");
            }
            search_unital_residuation(&o, args.budget)
        }
    };
    println!(
        "lattice {}  mode {}  found {}  exhausted {}  nodes {}",
        r.lattice_id,
        r.mode,
        r.found.len(),
        r.exhausted,
        r.nodes
    );
    let stem = args.file.file_stem().and_then(|s| s.to_str()).unwrap_or("structure").to_string();
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir)?;
    }
    for (k, s) in r.found.iter().enumerate() {
        let out = StructureFile::from_poset(s.poset())
            .with_mul(s.mul_table())
            .with_unit(s.flags().unit);
        let out = match &f.ortho {
            Some(o) => StructureFile { ortho: Some(o.clone()), ..out },
            None => out,
        };
        match &args.out_dir {
            Some(dir) => std::fs::write(dir.join(format!("{stem}-{}-{k:03}.struct", r.mode)), out.serialize())?,
            None => print!("# found {k}\n{}", out.serialize()),
        }
    }
    let mut reports = vec![r.check_verified()];
    reports.extend(r.downset_reports.iter().cloned());
    Ok(report(&reports, format))
}

fn rn<T: Scalar>(args: &RnArgs, format: Format) -> Result<i32> {
    let defaults = QuantaleContext::<T>::new(args.dim)?;
    let ctx = QuantaleContext::<T>::with_tolerances(
        args.dim,
        args.tol_rank.unwrap_or(defaults.tol_rank().as_f64()),
        args.tol_eq.unwrap_or(defaults.tol_eq().as_f64()),
    )?
    .with_seed(args.seed);
    let reports = verify_theorem_rn(&ctx, args.trials, args.seed)?;
    Ok(report(&reports, format))
}

fn rn_op(args: &RnOpArgs) -> Result<i32> {
    let ctx = QuantaleContext::<f64>::new(args.dim)?;
    let a = ctx.span_f64(&parse_vectors(&args.a)?)?;
    let b = || -> Result<Subspace<f64>> {
        let text = args.b.as_deref().context("this operation needs --b")?;
        Ok(ctx.span_f64(&parse_vectors(text)?)?)
    };
    let out = match args.op {
        RnOp::Ortho => ctx.ortho(&a)?,
        RnOp::Mul => ctx.mul(&a, &b()?)?,
        RnOp::Meet => ctx.meet(&a, &b()?)?,
        RnOp::Join => ctx.join(&a, &b()?)?,
        RnOp::Residuum => ctx.residuum(&a, &b()?)?,
    };
    println!("dim {}", out.dim());
    for col in out.columns_f64() {
        let parts: Vec<String> = col.iter().map(|x| format!("{x:.12}")).collect();
        println!("{}", parts.join(","));
    }
    Ok(0)
}
