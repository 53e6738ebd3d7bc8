//! Command-line front end; prints JSON and exits with 0, 1 (I/O), 2 (schema) or 3 (semantic).

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use qcalab::cli::{cmd_coarse, cmd_index, cmd_k1, cmd_normalize, cmd_validate, CoarseMode};

#[derive(Parser)]
#[command(name = "qcalab", version, about = "Exact computations for quantum cellular automata")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Deg,
    Class,
    Homologous,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a document against its schema and, for homomorphisms, all relations.
    Validate { file: PathBuf },
    /// Boundary index of an automorphism of an interval or circle.
    Index {
        file: PathBuf,
        /// Cut between sites γ and γ+1 (default: the central cut).
        #[arg(long)]
        cut: Option<usize>,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        /// Evaluate every admissible cut and require equal values.
        #[arg(long)]
        all_cuts: bool,
    },
    /// Factor an isomorphism as a shift composed with a correction.
    Normalize { file: PathBuf },
    /// Degree chains with their classes, or the bounded homology test on two inputs.
    Coarse {
        #[arg(value_enum)]
        mode: Mode,
        files: Vec<PathBuf>,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Rationalized determinant class of an invertible matrix.
    K1 {
        file: PathBuf,
        #[arg(long)]
        size: Option<usize>,
    },
}

fn main() {
    let out = match Args::parse().cmd {
        Cmd::Validate { file } => cmd_validate(&file),
        Cmd::Index { file, cut, radius, all_cuts } => cmd_index(&file, cut, radius, all_cuts),
        Cmd::Normalize { file } => cmd_normalize(&file),
        Cmd::Coarse { mode, files, bound } => {
            let mode = match mode {
                Mode::Deg => CoarseMode::Deg,
                Mode::Class => CoarseMode::Class,
                Mode::Homologous => CoarseMode::Homologous,
            };
            let paths: Vec<&std::path::Path> = files.iter().map(PathBuf::as_path).collect();
            cmd_coarse(mode, &paths, bound.as_deref())
        }
        Cmd::K1 { file, size } => cmd_k1(&file, size),
    };
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{}", out.render());
    std::process::exit(out.code);
}
