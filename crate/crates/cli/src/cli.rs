use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sft_core::block::{build_blocks, build_hmatrix, build_vpairs};
use sft_core::matrix::{build_strip_matrix, prune};
use sft_core::strip::enumerate_strips;
use sft_core::{
    analyze, find_periodic, normalize_to_cubes, AnalysisReport, Budgets, Grid, SftSpec, Status,
};

use crate::dsl::parse_spec;
use crate::json::{point_from_json, to_json, MatrixJson, ReportJson, StripJson};
use crate::render::{matrix_dot, render_point, symbol_chars, Format};

/// Overrides the torus cell cap.
pub const MAX_CELLS_VAR: &str = "SFT_MAX_CELLS";

#[derive(Debug, Parser)]
#[command(
    name = "sft",
    about = "Analyze multidimensional subshifts of finite type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the normalization length and the number of allowed cubes.
    Normalize {
        file: PathBuf,
        /// Also print every allowed cube.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = Budgets::default().cube_cap)]
        cube_cap: u64,
    },
    /// Count blocks, vertical pairs and pair adjacencies (planar only).
    Blocks {
        file: PathBuf,
        #[arg(long)]
        list: bool,
    },
    /// List canonical periodic strips.
    Strips {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_period: usize,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Build the strip matrix.
    Matrix {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_period: usize,
        /// Prune to the largest complementary family first.
        #[arg(long)]
        prune: bool,
        /// Also write the matrix as a DOT digraph.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        format: OutFormat,
    },
    /// Decide emptiness within budgets.
    Analyze(AnalyzeArgs),
    /// Search for a periodic point only.
    FindPeriodic(AnalyzeArgs),
    /// Draw a point from a point or report JSON file.
    Render {
        file: PathBuf,
        #[arg(long, default_value = "ascii")]
        format: String,
        #[arg(long, default_value_t = 16)]
        width: usize,
        #[arg(long, default_value_t = 16)]
        height: usize,
        /// Write here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long, default_value_t = Budgets::default().max_period)]
    max_period: usize,
    /// Largest window side for the emptiness check.
    #[arg(long, default_value_t = Budgets::default().n_max)]
    max_square: usize,
    #[arg(long, default_value_t = Budgets::default().max_strips)]
    max_strips: usize,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Include stage timings in JSON output.
    #[arg(long)]
    timings: bool,
}

/// Runs the tool and returns the exit code: 0 on success or a decided
/// verdict, 2 on UNKNOWN, 1 on any error.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let max_cells = std::env::var(MAX_CELLS_VAR).ok();
    match execute(cli.command, max_cells.as_deref(), out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn load(path: &Path) -> anyhow::Result<SftSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = parse_spec(&text).map_err(|e| anyhow!("{}:{e}", path.display()))?;
    Ok(doc.spec)
}

/// Applies a `SFT_MAX_CELLS` value to the budgets.
pub fn apply_max_cells(b: &mut Budgets, value: Option<&str>) -> anyhow::Result<()> {
    if let Some(v) = value {
        b.torus_cells = v
            .trim()
            .parse()
            .with_context(|| format!("{MAX_CELLS_VAR}={v:?} is not a cell count"))?;
    }
    Ok(())
}

fn rows_text(g: &Grid, names: &[char]) -> String {
    let (w, h) = (g.shape()[0], g.shape()[1]);
    let mut s = String::new();
    for y in (0..h).rev() {
        s.extend((0..w).map(|x| names[g.cells()[x * h + y] as usize]));
        s.push('\n');
    }
    s
}

fn execute(cmd: Command, max_cells: Option<&str>, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Normalize {
            file,
            list,
            cube_cap,
        } => {
            let spec = load(&file)?;
            let cubes = normalize_to_cubes(&spec, cube_cap)?;
            writeln!(
                out,
                "l={}, allowed_cubes={}",
                cubes.side(),
                cubes.allowed().len()
            )?;
            if list {
                let chars = symbol_chars(spec.alphabet().symbols());
                for g in cubes.allowed_grids() {
                    if g.dim() == 2 {
                        writeln!(out, "{}", rows_text(&g, &chars))?;
                    } else {
                        let s: String = g.cells().iter().map(|&c| chars[c as usize]).collect();
                        writeln!(out, "{s}")?;
                    }
                }
            }
        }
        Command::Blocks { file, list } => {
            let spec = load(&file)?;
            let cubes = normalize_to_cubes(&spec, Budgets::default().cube_cap)?;
            let blocks = build_blocks(&spec, &cubes)?;
            let pairs = build_vpairs(&spec, &blocks);
            let h = build_hmatrix(&spec, &pairs);
            writeln!(
                out,
                "blocks={}, vpairs={}, adjacencies={}",
                blocks.len(),
                pairs.len(),
                h.entries.ones()
            )?;
            if list {
                let chars = symbol_chars(spec.alphabet().symbols());
                for b in &blocks {
                    writeln!(out, "{}", rows_text(b.grid(), &chars))?;
                }
            }
        }
        Command::Strips {
            file,
            max_period,
            format,
        } => {
            let spec = load(&file)?;
            let strips = strips_of(&spec, max_period)?;
            match format {
                OutFormat::Json => {
                    let v: Vec<StripJson> =
                        strips.iter().map(|s| StripJson::new(&spec, s)).collect();
                    write!(out, "{}", to_json(&v))?;
                }
                OutFormat::Text => {
                    writeln!(out, "strips={}", strips.len())?;
                    let chars = symbol_chars(spec.alphabet().symbols());
                    for (i, s) in strips.iter().enumerate() {
                        writeln!(out, "#{i} period={}", s.period())?;
                        write!(out, "{}", rows_text(&s.grid(), &chars))?;
                    }
                }
            }
        }
        Command::Matrix {
            file,
            max_period,
            prune: do_prune,
            dot,
            format,
        } => {
            let spec = load(&file)?;
            let strips = strips_of(&spec, max_period)?;
            let mut m = build_strip_matrix(&spec, &strips);
            if do_prune {
                m = prune(&m);
            }
            if let Some(path) = dot {
                let chars = symbol_chars(spec.alphabet().symbols());
                let labels: Vec<String> = m
                    .indices()
                    .iter()
                    .map(|s| rows_text(&s.grid(), &chars).trim_end().replace('\n', "/"))
                    .collect();
                fs::write(&path, matrix_dot(&m, &labels))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            match format {
                OutFormat::Json => write!(out, "{}", to_json(&MatrixJson::new(&spec, &m)))?,
                OutFormat::Text => {
                    writeln!(out, "dim={}, ones={}", m.dim(), m.entries().ones())?;
                    for row in m.entries().to_bit_rows() {
                        writeln!(out, "{row}")?;
                    }
                }
            }
        }
        Command::Analyze(args) => return run_analysis(args, max_cells, true, out),
        Command::FindPeriodic(args) => return run_analysis(args, max_cells, false, out),
        Command::Render {
            file,
            format,
            width,
            height,
            output,
        } => {
            let format: Format = format.parse()?;
            let text =
                fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let pt = point_from_json(&text).map_err(|e| anyhow!("{}: {e}", file.display()))?;
            let bytes = render_point(&pt.torus()?, &pt.alphabet, width, height, format)?;
            match output {
                Some(path) => fs::write(&path, bytes)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(&bytes)?,
            }
        }
    }
    Ok(0)
}

fn strips_of(spec: &SftSpec, max_period: usize) -> anyhow::Result<Vec<sft_core::PeriodicStrip>> {
    let b = Budgets::default();
    let cubes = normalize_to_cubes(spec, b.cube_cap)?;
    let blocks = build_blocks(spec, &cubes)?;
    Ok(enumerate_strips(spec, &blocks, max_period, b.max_strips)?)
}

fn run_analysis(
    args: AnalyzeArgs,
    max_cells: Option<&str>,
    check_empty: bool,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    if args.max_period == 0 || args.max_square == 0 {
        bail!("--max-period and --max-square must be positive");
    }
    let spec = load(&args.file)?;
    let mut b = Budgets {
        max_period: args.max_period,
        n_max: args.max_square,
        max_strips: args.max_strips,
        ..Budgets::default()
    };
    apply_max_cells(&mut b, max_cells)?;
    let report = if check_empty {
        analyze(&spec, b)?
    } else {
        find_periodic(&spec, b)?
    };
    match args.format {
        OutFormat::Json => write!(
            out,
            "{}",
            to_json(&ReportJson::new(&spec, &report, args.timings))
        )?,
        OutFormat::Text => write!(out, "{}", report_text(&spec, &report))?,
    }
    Ok(match report.status {
        Status::Unknown => 2,
        Status::Nonempty | Status::Empty => 0,
    })
}

fn report_text(spec: &SftSpec, r: &AnalysisReport) -> String {
    let mut s = format!("status: {}\n", r.status.as_str());
    if let Some(n) = r.witness() {
        s += &format!("witness: no admissible {n}-cube window\n");
    }
    if let Some(pt) = r.point() {
        let periods: Vec<String> = pt.periods().iter().map(usize::to_string).collect();
        s += &format!("periods: {}\n", periods.join("x"));
        if pt.periods().len() == 2 {
            let chars = symbol_chars(spec.alphabet().symbols());
            s += &rows_text(pt.torus().grid(), &chars);
        }
    }
    let st = &r.stats;
    s += &format!("l: {}\n", st.normalization_length);
    if let Some(c) = st.allowed_cubes {
        s += &format!("allowed cubes: {c}\n");
    }
    if st.period_reached > 0 {
        s += &format!(
            "strips: {} at max period {}, matrix {} pruned to {}\n",
            st.strips, st.period_reached, st.matrix_dim, st.pruned_dim
        );
    }
    for d in &r.diagnostics {
        s += &format!("note: {d}\n");
    }
    s
}
