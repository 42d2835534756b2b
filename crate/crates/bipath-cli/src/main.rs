//! Batch front end: parse the text formats, run decomposition, slice,
//! distance and fibered computations, and run the self-test suites.
//!
//! Exit codes: 0 success, 1 validation or invariant failure, 2 parse or
//! usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bipath_core::bipath::BipathModule;
use bipath_core::distance::{bottleneck_matching, orbit_blocks};
use bipath_core::fibered::{GridModule, fibered_arc_code, h0_bifiltration, line_barcode};
use bipath_core::field::FieldSpec;
use bipath_core::io;

mod selftest;

#[derive(Parser)]
#[command(
    name = "bipath",
    version,
    about = "Bipath persistence: arc codes, bottleneck distances, fibered invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a module file (BIPATH, ZIGZAG or GRID) and check its invariants
    Validate {
        file: PathBuf,
        /// Reinterpret matrices over GF(p) instead of the header's field
        #[arg(long)]
        field: Option<u32>,
    },
    /// Decompose a bipath module into its arc code
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        field: Option<u32>,
        /// Write output here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the finite zigzag slice of a bipath module (ZIGZAG format)
    Slice {
        file: PathBuf,
        #[arg(long)]
        field: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bottleneck (= interleaving) distance between two bipath modules
    Distance {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        field: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arc codes of a grid module pulled back along embeddings; optionally
    /// barcodes along monotone paths. The grid file may be a GRID module or
    /// a BIFILT graph bifiltration (reduced 0-th homology, GF(2) default)
    Fiber {
        grid: PathBuf,
        embeddings: PathBuf,
        /// Also print line barcodes for the PATH blocks in this file
        #[arg(long)]
        lines: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        field: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the planted-oracle and property suites
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

/// Failures carry the exit code they should produce.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn validation(msg: impl std::fmt::Display) -> Self {
        Failure {
            code: 1,
            msg: msg.to_string(),
        }
    }

    fn parse(msg: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            msg: msg.to_string(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_bipath(path: &Path, field: Option<u32>) -> Result<BipathModule, Failure> {
    let text = read_file(path)?;
    let module =
        io::parse_bipath(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let module = match field {
        None => module,
        Some(p) => {
            let f = FieldSpec::new(p).map_err(Failure::validation)?;
            module.with_field(f).map_err(Failure::validation)?
        }
    };
    module.validate().map_err(Failure::validation)?;
    Ok(module)
}

/// Loads a grid module from a GRID file, or builds one as the reduced 0-th
/// homology of a BIFILT file (over GF(2) unless `--field` says otherwise).
fn load_grid(path: &Path, field: Option<u32>) -> Result<GridModule, Failure> {
    let text = read_file(path)?;
    let keyword = text.split_whitespace().next().unwrap_or("");
    match keyword {
        "GRID" => {
            let grid = io::parse_grid(&text)
                .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
            let grid = match field {
                None => grid,
                Some(p) => {
                    let f = FieldSpec::new(p).map_err(Failure::validation)?;
                    grid.with_field(f).map_err(Failure::validation)?
                }
            };
            grid.validate().map_err(Failure::validation)?;
            Ok(grid)
        }
        "BIFILT" => {
            let bf = io::parse_bifiltration(&text)
                .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
            let f = FieldSpec::new(field.unwrap_or(2)).map_err(Failure::validation)?;
            h0_bifiltration(f, bf.rows, bf.cols, &bf.vertex_grades, &bf.edges)
                .map_err(Failure::validation)
        }
        other => Err(Failure::parse(format!(
            "{}: unknown format `{other}`",
            path.display()
        ))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file, field } => {
            let text = read_file(&file)?;
            let keyword = text.split_whitespace().next().unwrap_or("");
            match keyword {
                "BIPATH" => {
                    load_bipath(&file, field)?;
                }
                "ZIGZAG" => {
                    let rep = io::parse_zigzag(&text).map_err(Failure::parse)?;
                    let rep = match field {
                        None => rep,
                        Some(p) => {
                            let f = FieldSpec::new(p).map_err(Failure::validation)?;
                            if !rep.maps.iter().all(|m| m.entries_canonical(f)) {
                                return Err(Failure::validation(format!(
                                    "entries not reduced mod {p}"
                                )));
                            }
                            let mut rep = rep;
                            rep.field = f;
                            rep
                        }
                    };
                    rep.validate().map_err(Failure::validation)?;
                }
                "GRID" | "BIFILT" => {
                    load_grid(&file, field)?;
                }
                other => {
                    return Err(Failure::parse(format!("unknown format `{other}`")));
                }
            }
            println!("ok");
            Ok(())
        }
        Command::Decompose {
            file,
            format,
            field,
            out,
        } => {
            let module = load_bipath(&file, field)?;
            let ac = module.arc_code().map_err(Failure::validation)?;
            let content = match format {
                Format::Text => io::arc_code_to_text(&ac),
                Format::Json => format!("{}\n", io::arc_code_to_json(&ac)),
            };
            emit(&out, &content)
        }
        Command::Slice { file, field, out } => {
            let module = load_bipath(&file, field)?;
            let slice = module.restrict_to_slice().map_err(Failure::validation)?;
            emit(&out, &io::write_zigzag(&slice))
        }
        Command::Distance {
            file_a,
            file_b,
            format,
            field,
            out,
        } => {
            let a = load_bipath(&file_a, field)?;
            let b = load_bipath(&file_b, field)?;
            if a.poset != b.poset {
                return Err(Failure::validation("modules live over different posets"));
            }
            let ac_a = a.arc_code().map_err(Failure::validation)?;
            let ac_b = b.arc_code().map_err(Failure::validation)?;
            let (d, matching) =
                bottleneck_matching(&ac_a, &ac_b, &a.poset).map_err(Failure::validation)?;
            let content = match format {
                Format::Text => format!("{d}\n"),
                Format::Json => {
                    let oa = orbit_blocks(&ac_a, &a.poset);
                    let ob = orbit_blocks(&ac_b, &b.poset);
                    format!("{}\n", io::distance_to_json(&d, &matching, &oa, &ob))
                }
            };
            emit(&out, &content)
        }
        Command::Fiber {
            grid,
            embeddings,
            lines,
            format,
            field,
            out,
        } => {
            let gmod = load_grid(&grid, field)?;
            let etext = read_file(&embeddings)?;
            let embs = io::parse_embeddings(&etext)
                .map_err(|e| Failure::parse(format!("{}: {e}", embeddings.display())))?;
            let codes = fibered_arc_code(&gmod, &embs).map_err(Failure::validation)?;
            let mut content = String::new();
            match format {
                Format::Text => {
                    for (k, ac) in codes.iter().enumerate() {
                        content.push_str(&format!("# embedding {k}\n"));
                        content.push_str(&io::arc_code_to_text(ac));
                    }
                }
                Format::Json => {
                    let parts: Vec<String> = codes.iter().map(io::arc_code_to_json).collect();
                    content = format!("[{}]\n", parts.join(","));
                }
            }
            if let Some(lines_path) = lines {
                let ptext = read_file(&lines_path)?;
                let paths = io::parse_paths(&ptext)
                    .map_err(|e| Failure::parse(format!("{}: {e}", lines_path.display())))?;
                for (k, path) in paths.iter().enumerate() {
                    let bc = line_barcode(&gmod, path).map_err(Failure::validation)?;
                    match format {
                        Format::Text => {
                            content.push_str(&format!("# path {k}\n"));
                            if bc.is_empty() {
                                content.push_str("(empty)\n");
                            }
                            for (iv, mult) in bc.iter() {
                                content.push_str(&format!("{iv} x{mult}\n"));
                            }
                        }
                        Format::Json => {
                            let bars: Vec<String> = bc
                                .iter()
                                .map(|(iv, m)| {
                                    format!(
                                        "{{\"first\":{},\"last\":{},\"mult\":{m}}}",
                                        iv.first, iv.last
                                    )
                                })
                                .collect();
                            content.push_str(&format!("[{}]\n", bars.join(",")));
                        }
                    }
                }
            }
            emit(&out, &content)
        }
        Command::Selftest { seed, trials } => selftest::run(seed, trials),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
