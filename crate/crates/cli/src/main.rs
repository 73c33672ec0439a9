use clap::{Args, Parser, Subcommand, ValueEnum};
use divdiv::biharmonic::{convergence_study, fitted_slope, manufactured_case, solve_case, to_csv, ConvergenceRow};
use divdiv::mesh::{cartesian, pentagonal_prism, perturbed_hexahedron, read_mesh, reference_tetrahedron, unit_cube, Mesh};
use divdiv::verify::{run_suite, voronoi_cell, SuiteReport};
use divdiv::Execution;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "divdiv", version, about = "DDR divdiv complex: local checks and biharmonic solves")]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for per-element work.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the local verification suite on an element.
    Check(CheckArgs),
    /// Solve the biharmonic problem on one mesh.
    Solve(SolveArgs),
    /// Convergence study over a mesh family.
    Convergence(ConvergenceArgs),
    /// Write a Cartesian mesh of the unit cube as JSON.
    GenMesh(GenMeshArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ElementKind {
    Cube,
    Tet,
    Hex,
    Prism,
    Voronoi,
    File,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum, default_value = "cube")]
    element: ElementKind,
    /// Mesh file, required with `--element file`.
    #[arg(long)]
    mesh: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    degree: usize,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, conflicts_with = "cube", required_unless_present = "cube")]
    mesh: Option<PathBuf>,
    /// `n x n x n` cubes on the unit cube.
    #[arg(long)]
    cube: Option<usize>,
    #[arg(long, default_value_t = 0)]
    degree: usize,
    #[arg(long, default_value = "bubble")]
    case: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergenceArgs {
    /// `cube`, or a comma-separated list of mesh files.
    #[arg(long, default_value = "cube")]
    family: String,
    /// Degree range `a..b` (inclusive) or a single degree.
    #[arg(long, default_value = "0..1", value_parser = parse_degrees)]
    degrees: Degrees,
    /// Cube subdivisions for `--family cube`.
    #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
    sizes: Vec<usize>,
    #[arg(long, default_value = "bubble")]
    case: String,
    /// Combined CSV; one `<stem>_k<k>.csv` per degree is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenMeshArgs {
    #[arg(long)]
    cube: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone)]
struct Degrees(Vec<usize>);

fn parse_degrees(s: &str) -> Result<Degrees, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad degree {t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty degree range {s}"));
            }
            Ok(Degrees((a..=b).collect()))
        }
        None => Ok(Degrees(vec![num(s)?])),
    }
}

type CliResult<T> = Result<T, String>;

fn element_mesh(kind: ElementKind, path: Option<&Path>, seed: u64) -> CliResult<(String, Mesh)> {
    Ok(match kind {
        ElementKind::Cube => ("cube".into(), unit_cube()),
        ElementKind::Tet => ("tetrahedron".into(), reference_tetrahedron()),
        ElementKind::Hex => ("perturbed-hexahedron".into(), perturbed_hexahedron(seed)),
        ElementKind::Prism => ("pentagonal-prism".into(), pentagonal_prism(seed)),
        ElementKind::Voronoi => ("voronoi".into(), voronoi_cell()),
        ElementKind::File => {
            let p = path.ok_or("--element file needs --mesh <path>")?;
            (p.display().to_string(), read_mesh(p).map_err(|e| e.to_string())?)
        }
    })
}

fn print_suite(r: &SuiteReport) {
    println!("element {} k={} seed={}", r.element, r.k, r.seed);
    for c in &r.cells {
        println!(
            "cell {}: complex {:.1e} | exactness {} | commutation {:.1e} | ipp {:.1e} | traces {:.1e} | curl link {:.1e} | min eig {:.3e}",
            c.cell,
            c.complex.max(),
            if c.exactness.pass { "pass" } else { "FAIL" },
            c.commutation.max(),
            c.integration_by_parts.max(),
            c.trimmed_traces.srtrim.max(c.trimmed_traces.htrim),
            c.curl_link,
            c.norms.product_min_eigenvalue,
        );
        println!(
            "  ranks devgrad {} symcurl {} divdiv {} | kernel devgrad {} | divdiv defect {}",
            c.exactness.rank_devgrad,
            c.exactness.rank_symcurl,
            c.exactness.rank_divdiv,
            c.exactness.kernel_devgrad,
            c.exactness.divdiv_defect,
        );
        if let Some(n) = &c.exactness.note {
            println!("  note: {n}");
        }
    }
    println!("{}", if r.pass { "PASS" } else { "FAIL" });
}

fn check(args: &CheckArgs, seed: u64) -> CliResult<bool> {
    let (name, m) = element_mesh(args.element, args.mesh.as_deref(), seed)?;
    let r = run_suite(&name, &m, args.degree, seed, Execution::Parallel).map_err(|e| e.to_string())?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&r).map_err(|e| e.to_string())?);
    } else {
        print_suite(&r);
    }
    for f in &r.failures {
        eprintln!(
            "check failed: {} (cell {}): {:e} against {:e}",
            f.check, f.cell, f.value, f.tolerance
        );
    }
    Ok(r.pass)
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn solve(args: &SolveArgs) -> CliResult<bool> {
    let m = match (&args.mesh, args.cube) {
        (Some(p), _) => read_mesh(p).map_err(|e| e.to_string())?,
        (None, Some(n)) => cartesian(n, [0.0; 3], [1.0; 3]).map_err(|e| e.to_string())?,
        (None, None) => unreachable!("clap requires one of --mesh, --cube"),
    };
    let case = manufactured_case(&args.case).map_err(|e| e.to_string())?;
    let row = solve_case(&m, args.degree, &case, Execution::Parallel).map_err(|e| e.to_string())?;
    let csv = to_csv(&[row]);
    match &args.out {
        Some(p) => write(p, &csv)?,
        None => print!("{csv}"),
    }
    eprintln!("residual {:e}", row.residual);
    Ok(true)
}

fn per_degree_path(out: &Path, k: usize) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("convergence");
    out.with_file_name(format!("{stem}_k{k}.csv"))
}

fn convergence(args: &ConvergenceArgs) -> CliResult<bool> {
    let meshes: Vec<Mesh> = if args.family == "cube" {
        if args.sizes.is_empty() {
            return Err("--family cube needs --sizes".into());
        }
        args.sizes
            .iter()
            .map(|&n| cartesian(n, [0.0; 3], [1.0; 3]))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?
    } else {
        args.family
            .split(',')
            .map(|p| read_mesh(p.trim()).map_err(|e| format!("{p}: {e}")))
            .collect::<Result<_, _>>()?
    };
    let case = manufactured_case(&args.case).map_err(|e| e.to_string())?;
    let rows = convergence_study(&meshes, &args.degrees.0, &case, Execution::Parallel).map_err(|e| e.to_string())?;
    match &args.out {
        Some(p) => {
            write(p, &to_csv(&rows))?;
            for &k in &args.degrees.0 {
                let rk: Vec<ConvergenceRow> = rows.iter().filter(|r| r.k == k).copied().collect();
                write(&per_degree_path(p, k), &to_csv(&rk))?;
            }
        }
        None => print!("{}", to_csv(&rows)),
    }
    eprintln!("k,slope");
    for &k in &args.degrees.0 {
        let rk: Vec<ConvergenceRow> = rows.iter().filter(|r| r.k == k).copied().collect();
        let slope = fitted_slope(&rk).map(|s| format!("{s:.4}")).unwrap_or_default();
        eprintln!("{k},{slope}");
    }
    Ok(true)
}

fn gen_mesh(args: &GenMeshArgs) -> CliResult<bool> {
    let m = cartesian(args.cube, [0.0; 3], [1.0; 3]).map_err(|e| e.to_string())?;
    let json = m.to_json();
    match &args.out {
        Some(p) => write(p, &json)?,
        None => println!("{json}"),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        divdiv::set_threads(n);
    }
    let result = match &cli.command {
        Command::Check(a) => check(a, cli.seed),
        Command::Solve(a) => solve(a),
        Command::Convergence(a) => convergence(a),
        Command::GenMesh(a) => gen_mesh(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
