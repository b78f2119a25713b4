//! Command-line frontend: parse bound quivers, build relation-extensions and
//! repetitive windows, knit transjective strips, enumerate fibre quotients
//! with their slice distances, and (experimentally) insert corays into tubes.

use clap::{Parser, Subcommand};
use ctknit_core::algebra::{default_length_cap, path_algebra, AlgebraError};
use ctknit_core::export;
use ctknit_core::extension::{cluster_repetitive, relation_extension, ExtensionData};
use ctknit_core::quiver::{parse_bound_quiver, BoundQuiver};
use ctknit_core::rep::{injective, Representation};
use ctknit_core::slices::{slice_from_modules, SliceModules};
use ctknit_core::strip::{
    enumerate_fibre_quotients, init_from_slice, Strip, StripConfig, StripError,
};
use ctknit_core::tube::{insert_coray, knit_tube};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "ctknit", version, about = "bound quivers, slice reflections and AR-quiver knitting for cluster-tilted algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Mode {
    Finite,
    Infinite,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a bound quiver file: vertices, arrows, dimension.
    Info {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 0)]
        length_cap: usize,
    },
    /// Print the relation-extension and a repetitive window.
    Extend {
        #[arg(long)]
        input: PathBuf,
        /// comma-separated names for the new arrows, one per relation
        #[arg(long)]
        new_arrows: Option<String>,
        /// window copies [0, N]
        #[arg(long, default_value_t = 2)]
        copies: i64,
    },
    /// Knit the transjective component from a slice.
    Knit {
        #[arg(long)]
        input: PathBuf,
        /// slice JSON file, or `auto` (hereditary algebras only)
        #[arg(long)]
        slice: String,
        #[arg(long, value_enum, default_value = "finite")]
        mode: Mode,
        #[arg(long)]
        knit_cap: Option<usize>,
        #[arg(long)]
        reflect_cap: Option<usize>,
        #[arg(long, default_value_t = 16)]
        copies: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// comma-separated names for the new arrows of the extension
        #[arg(long)]
        new_arrows: Option<String>,
    },
    /// Enumerate the fibre quotients reachable by reflections/coreflections,
    /// with the pairwise slice distances.
    FibreQuotients {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        slice: String,
        #[arg(long)]
        knit_cap: Option<usize>,
        #[arg(long)]
        reflect_cap: Option<usize>,
        #[arg(long, default_value_t = 16)]
        copies: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        new_arrows: Option<String>,
        /// worker threads for the distance matrix
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// write each algebra presentation into this directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// EXPERIMENTAL: insert the coray of the extension injective at a vertex
    /// into a tube of the base algebra.
    Tube {
        #[arg(long)]
        input: PathBuf,
        /// tube JSON: {"rank": r, "mouth": [module specs], "depth": n}
        #[arg(long)]
        tube: PathBuf,
        /// vertex of the projective at which to insert
        #[arg(long)]
        vertex: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        new_arrows: Option<String>,
    },
}

enum Failure {
    Config(String),
    Domain(String),
    Cap(String),
    /// cap exceeded, but a partial result was produced and must be written
    CapPartial { output: String, msg: String },
}

impl Failure {
    fn exit(&self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Config(m) => (2, m),
            Failure::Domain(m) => (3, m),
            Failure::Cap(m) => (4, m),
            Failure::CapPartial { output, msg } => {
                print!("{}", output);
                eprintln!("error: {}", msg);
                return ExitCode::from(4);
            }
        };
        eprintln!("error: {}", msg);
        ExitCode::from(code)
    }
}

fn classify_algebra(e: AlgebraError) -> Failure {
    match e {
        AlgebraError::Quiver(q) => Failure::Config(q.to_string()),
        other => Failure::Domain(other.to_string()),
    }
}

fn classify_strip(e: StripError) -> Failure {
    match e {
        StripError::CapExceeded(n) => Failure::Cap(format!("step cap exceeded ({n})")),
        StripError::Window(w) => Failure::Cap(w.to_string()),
        other => Failure::Domain(other.to_string()),
    }
}

fn read_quiver(path: &PathBuf) -> Result<BoundQuiver, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {}", path.display(), e)))?;
    parse_bound_quiver(&text).map_err(|e| Failure::Config(e.to_string()))
}

fn names_of(opt: &Option<String>) -> Option<Vec<String>> {
    opt.as_ref()
        .map(|s| s.split(',').map(|x| x.trim().to_string()).collect())
}

fn build_ext(q: &BoundQuiver, new_arrows: &Option<String>) -> Result<ExtensionData, Failure> {
    let names = names_of(new_arrows);
    relation_extension(q, names.as_deref()).map_err(|e| Failure::Domain(e.to_string()))
}

/// Read a slice over the base algebra: module specs from JSON, or the
/// injectives when `auto` and the algebra is hereditary.
fn read_slice(
    spec: &str,
    base: &Arc<ctknit_core::algebra::Algebra>,
) -> Result<Vec<Representation>, Failure> {
    if spec == "auto" {
        if !base.quiver.relations.is_empty() {
            return Err(Failure::Config(
                "--slice auto needs a hereditary algebra; supply an explicit slice file".into(),
            ));
        }
        return Ok((0..base.n).map(|x| injective(base, x)).collect());
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Failure::Config(format!("{}: {}", spec, e)))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Config(e.to_string()))?;
    let arr = v
        .as_array()
        .ok_or_else(|| Failure::Config("slice file must be a JSON array of module specs".into()))?;
    arr.iter()
        .map(|s| export::module_from_spec(base, s).map_err(Failure::Config))
        .collect()
}

fn lifted_slice(
    window: &ctknit_core::extension::Window,
    mods: &[Representation],
) -> Result<SliceModules, Failure> {
    let lifted: Vec<Representation> = mods.iter().map(|m| window.lift(m, 0)).collect();
    slice_from_modules(lifted).map_err(|e| Failure::Domain(e.to_string()))
}

fn cmd_info(input: &PathBuf, format: Format, length_cap: usize) -> Result<String, Failure> {
    let q = read_quiver(input)?;
    let cap = if length_cap == 0 { default_length_cap(&q) } else { length_cap };
    let alg = path_algebra(&q, cap).map_err(classify_algebra)?;
    Ok(match format {
        Format::Json => {
            let j = serde_json::json!({
                "vertices": q.vertices.len(),
                "arrows": q.arrows.len(),
                "relations": q.relations.len(),
                "dimension": alg.dim,
                "nilpotency_length": alg.max_len,
            });
            format!("{}\n", serde_json::to_string_pretty(&j).unwrap())
        }
        _ => format!(
            "{} vertices, {} arrows, {} relations, dim {}, nilpotency length {}\n",
            q.vertices.len(),
            q.arrows.len(),
            q.relations.len(),
            alg.dim,
            alg.max_len
        ),
    })
}

fn cmd_extend(input: &PathBuf, new_arrows: &Option<String>, copies: i64) -> Result<String, Failure> {
    let q = read_quiver(input)?;
    let ext = build_ext(&q, new_arrows)?;
    let window =
        cluster_repetitive(&ext, 0, copies).map_err(|e| Failure::Domain(e.to_string()))?;
    let mut out = String::new();
    out.push_str("# relation-extension\n");
    out.push_str(&ext.tilde.print());
    out.push_str(&format!("\n# repetitive window [0, {}]\n", copies));
    out.push_str(&window.quiver.print());
    Ok(out)
}

fn make_cfg(
    n: usize,
    knit_cap: Option<usize>,
    reflect_cap: Option<usize>,
    copies: i64,
    seed: u64,
) -> StripConfig {
    let mut cfg = StripConfig::for_base(n);
    if let Some(k) = knit_cap {
        cfg.knit_cap = k;
    }
    if let Some(r) = reflect_cap {
        cfg.reflect_cap = r;
    }
    cfg.copy_cap = copies;
    cfg.seed = seed;
    cfg
}

#[allow(clippy::too_many_arguments)]
fn cmd_knit(
    input: &PathBuf,
    slice: &str,
    mode: Mode,
    knit_cap: Option<usize>,
    reflect_cap: Option<usize>,
    copies: i64,
    format: Format,
    seed: u64,
    new_arrows: &Option<String>,
) -> Result<String, Failure> {
    let q = read_quiver(input)?;
    let ext = build_ext(&q, new_arrows)?;
    let window = cluster_repetitive(&ext, -3, 3).map_err(|e| Failure::Domain(e.to_string()))?;
    let mods = read_slice(slice, &window.base_algebra)?;
    let s = lifted_slice(&window, &mods)?;
    let cfg = make_cfg(q.vertices.len(), knit_cap, reflect_cap, copies, seed);
    let mut strip = init_from_slice(window, s, cfg).map_err(classify_strip)?;
    let build_result = match mode {
        Mode::Finite => strip.build_finite(),
        Mode::Infinite => strip.build_infinite().map(|_| ()),
    };
    match build_result {
        Ok(()) => render_strip(&strip, format),
        Err(StripError::CapExceeded(n)) => Err(Failure::CapPartial {
            output: render_strip(&strip, format)?,
            msg: format!("step cap exceeded ({n}); partial strip written"),
        }),
        Err(e) => Err(classify_strip(e)),
    }
}

fn render_strip(strip: &Strip, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Dot => export::strip_to_dot(strip),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&export::strip_to_json(strip)).unwrap()
        ),
        Format::Text => {
            let view = strip.quotient_view();
            export::quotient_view_text(&view)
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_fibre_quotients(
    input: &PathBuf,
    slice: &str,
    knit_cap: Option<usize>,
    reflect_cap: Option<usize>,
    copies: i64,
    format: Format,
    seed: u64,
    new_arrows: &Option<String>,
    jobs: usize,
    out_dir: &Option<PathBuf>,
) -> Result<String, Failure> {
    let q = read_quiver(input)?;
    let n = q.vertices.len();
    let ext = build_ext(&q, new_arrows)?;
    let window = cluster_repetitive(&ext, -3, 3).map_err(|e| Failure::Domain(e.to_string()))?;
    let mods = read_slice(slice, &window.base_algebra)?;
    let s = lifted_slice(&window, &mods)?;
    let cfg = make_cfg(n, knit_cap, reflect_cap, copies, seed);
    let (found, enum_window) =
        enumerate_fibre_quotients(&ext, &s, window, cfg).map_err(classify_strip)?;

    // master strip over several periods for the distance matrix
    let master_window =
        cluster_repetitive(&ext, -4, 8).map_err(|e| Failure::Domain(e.to_string()))?;
    let mods2 = read_slice(slice, &master_window.base_algebra)?;
    let s2 = lifted_slice(&master_window, &mods2)?;
    let mut mcfg = cfg;
    mcfg.periods = 3;
    mcfg.copy_cap = copies.max(24);
    let mut master = init_from_slice(master_window, s2, mcfg).map_err(classify_strip)?;
    master.build_finite().map_err(classify_strip)?;
    let witness_mods: Vec<Vec<Representation>> = found
        .iter()
        .map(|f| {
            f.witness
                .mods
                .iter()
                .map(|m| {
                    enum_window
                        .transport(m, &master.window)
                        .ok_or_else(|| Failure::Cap("witness outside the master window".into()))
                })
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let k = found.len();
    let mut matrix = vec![vec![0usize; k]; k];
    let pairs: Vec<(usize, usize)> =
        (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    if jobs > 1 && !pairs.is_empty() {
        let results: Vec<Option<usize>> = std::thread::scope(|scope| {
            let chunk_len = pairs.len().div_ceil(jobs).max(1);
            let handles: Vec<_> = pairs
                .chunks(chunk_len)
                .map(|chunk| {
                    let master = &master;
                    let witness_mods = &witness_mods;
                    scope.spawn(move || {
                        chunk
                            .iter()
                            .map(|&(i, j)| master.distance(&witness_mods[i], &witness_mods[j]))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
        });
        for (&(i, j), r) in pairs.iter().zip(results) {
            let d = r.ok_or_else(|| Failure::Cap("slices not located in the master strip".into()))?;
            matrix[i][j] = d;
            matrix[j][i] = d;
        }
    } else {
        for &(i, j) in &pairs {
            let d = master
                .distance(&witness_mods[i], &witness_mods[j])
                .ok_or_else(|| Failure::Cap("slices not located in the master strip".into()))?;
            matrix[i][j] = d;
            matrix[j][i] = d;
        }
    }

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::Config(format!("{}: {}", dir.display(), e)))?;
        for (i, f) in found.iter().enumerate() {
            let path = dir.join(format!("quotient{}.quiver", i));
            std::fs::write(&path, f.quiver.print())
                .map_err(|e| Failure::Config(format!("{}: {}", path.display(), e)))?;
        }
    }

    Ok(match format {
        Format::Json => {
            let algebras: Vec<serde_json::Value> = found
                .iter()
                .map(|f| serde_json::json!({ "presentation": f.quiver.print() }))
                .collect();
            let j = serde_json::json!({ "algebras": algebras, "distance_matrix": matrix });
            format!("{}\n", serde_json::to_string_pretty(&j).unwrap())
        }
        _ => {
            let mut out = String::new();
            for (i, f) in found.iter().enumerate() {
                out.push_str(&format!("# fibre quotient {}\n", i));
                out.push_str(&f.quiver.print());
                out.push('\n');
            }
            out.push_str("# distance matrix\n");
            for row in &matrix {
                let cells: Vec<String> = row.iter().map(|d| d.to_string()).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
            out
        }
    })
}

fn cmd_tube(
    input: &PathBuf,
    tube_path: &PathBuf,
    vertex: &str,
    format: Format,
    seed: u64,
    new_arrows: &Option<String>,
) -> Result<String, Failure> {
    let q = read_quiver(input)?;
    let ext = build_ext(&q, new_arrows)?;
    let base = Arc::new(path_algebra(&q, default_length_cap(&q)).map_err(classify_algebra)?);
    let text = std::fs::read_to_string(tube_path)
        .map_err(|e| Failure::Config(format!("{}: {}", tube_path.display(), e)))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Config(e.to_string()))?;
    let rank = v.get("rank").and_then(|x| x.as_u64()).unwrap_or(1) as usize;
    let depth = v.get("depth").and_then(|x| x.as_u64()).unwrap_or(2) as usize;
    let mouth: Vec<Representation> = v
        .get("mouth")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Failure::Config("tube file needs a `mouth` array".into()))?
        .iter()
        .map(|s| export::module_from_spec(&base, s).map_err(Failure::Config))
        .collect::<Result<_, _>>()?;
    let vx = q
        .vertex_index(vertex)
        .ok_or_else(|| Failure::Domain(format!("unknown vertex `{}`", vertex)))?;
    let frag =
        knit_tube(&base, &mouth, rank, depth, seed).map_err(|e| Failure::Domain(e.to_string()))?;
    let ins = insert_coray(&ext, &frag, vx, seed).map_err(|e| Failure::Domain(e.to_string()))?;
    let banner = "# EXPERIMENTAL: coray insertion is conjectural beyond the single-projective sectional case.\n";
    Ok(match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&export::tube_to_json(&ins.tube)).unwrap()
        ),
        Format::Dot => export::tube_to_dot(&ins.tube),
        Format::Text => {
            let mut out = String::from(banner);
            for n in &ins.tube.nodes {
                out.push_str(&format!(
                    "{}{}\n",
                    n.label,
                    if n.projective || n.injective { "  [PI]" } else { "" }
                ));
            }
            out
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Info { input, format, length_cap } => cmd_info(input, *format, *length_cap),
        Command::Extend { input, new_arrows, copies } => cmd_extend(input, new_arrows, *copies),
        Command::Knit {
            input,
            slice,
            mode,
            knit_cap,
            reflect_cap,
            copies,
            format,
            seed,
            new_arrows,
        } => cmd_knit(
            input, slice, *mode, *knit_cap, *reflect_cap, *copies, *format, *seed, new_arrows,
        ),
        Command::FibreQuotients {
            input,
            slice,
            knit_cap,
            reflect_cap,
            copies,
            format,
            seed,
            new_arrows,
            jobs,
            out,
        } => cmd_fibre_quotients(
            input, slice, *knit_cap, *reflect_cap, *copies, *format, *seed, new_arrows, *jobs,
            out,
        ),
        Command::Tube { input, tube, vertex, format, seed, new_arrows } => {
            cmd_tube(input, tube, vertex, *format, *seed, new_arrows)
        }
    };
    match result {
        Ok(out) => {
            print!("{}", out);
            ExitCode::SUCCESS
        }
        Err(f) => f.exit(),
    }
}
