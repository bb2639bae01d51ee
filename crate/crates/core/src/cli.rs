//! The `qml` command line tool.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::angle::Angle;
use crate::chord::Chord;
use crate::lamination::hausdorff_distance;
use crate::leaf_file::{
    format_leaves, format_sections, period_sections, read_leaf_file, write_leaf_file, LeafFileError,
};
use crate::limit::{build_qml_l, limit_class_of_qlam};
use crate::pullback::{build_pullback, CriticalPortrait};
use crate::qml::{component_type, is_fixed_return, is_valid_minor, lavaurs_qml, MinorLeaf};
use crate::render::{render_svg, RenderStyle, Zoom};
use crate::renorm::{build_qml_nr, HyperbolicRoot};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl From<LeafFileError> for CliError {
    fn from(e: LeafFileError) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qml",
    version,
    about = "Quadratic minor laminations and their limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write all minor leaves up to a period.
    GenQml {
        #[arg(long)]
        max_period: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split minors into fixed-return (kept) and erased.
    CleanL {
        #[arg(long)]
        max_period: usize,
        #[arg(long)]
        out_kept: PathBuf,
        #[arg(long)]
        out_erased: PathBuf,
    },
    /// Erase renormalizable minors.
    Nr {
        #[arg(long)]
        max_period: usize,
        #[arg(long)]
        dyadic_depth: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Pull back a critical leaf or quadrilateral.
    Pullback {
        /// Use the critical leaf with image point t.
        #[arg(long, conflicts_with = "quad", required_unless_present = "quad")]
        leaf: Option<String>,
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"])]
        quad: Option<Vec<String>>,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Map an angle into the wake of a root.
    Tune {
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        root: Vec<String>,
        #[arg(long)]
        angle: String,
    },
    /// Inverse of tune; prints `none` outside the image.
    Untune {
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        root: Vec<String>,
        #[arg(long)]
        angle: String,
    },
    /// Component type and return behaviour of a minor.
    Classify {
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        minor: Vec<String>,
        /// Also list the limit classes attached to the minor.
        #[arg(long)]
        limit: bool,
    },
    /// Hausdorff distance between two leaf files.
    Hausdorff { first: PathBuf, second: PathBuf },
    /// Draw leaf files as SVG.
    Render {
        #[arg(long = "in", value_delimiter = ',', required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, num_args = 3, value_names = ["CX", "CY", "SCALE"], allow_negative_numbers = true)]
        zoom: Option<Vec<f64>>,
        #[arg(long, default_value_t = 800)]
        size: u32,
    },
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

fn angle(s: &str) -> Result<Angle, CliError> {
    s.parse()
        .map_err(|e| CliError::Usage(format!("invalid angle {s:?}: {e}")))
}

fn chord(pair: &[String]) -> Result<Chord, CliError> {
    Ok(Chord::new(angle(&pair[0])?, angle(&pair[1])?))
}

fn root(pair: &[String]) -> Result<HyperbolicRoot, CliError> {
    HyperbolicRoot::from_chord(chord(pair)?).map_err(|e| CliError::Data(e.to_string()))
}

fn out_line(stdout: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(stdout, "{line}").map_err(|e| CliError::Data(e.to_string()))
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::GenQml { max_period, out } => {
            let minors = lavaurs_qml(max_period);
            write_leaf_file(&out, &format_sections(&period_sections(&minors)))?;
            out_line(stdout, &format!("{} minors", minors.len()))
        }
        Command::CleanL {
            max_period,
            out_kept,
            out_erased,
        } => {
            let qml = build_qml_l(max_period);
            let mut kept = format_sections(&period_sections(&qml.kept));
            kept.push_str("# retained endpoints\n");
            kept.push_str(&format_leaves(
                qml.retained_points.iter().cloned().map(Chord::point),
            ));
            write_leaf_file(&out_kept, &kept)?;
            write_leaf_file(&out_erased, &format_sections(&period_sections(&qml.erased)))?;
            out_line(
                stdout,
                &format!("{} kept, {} erased", qml.kept.len(), qml.erased.len()),
            )
        }
        Command::Nr {
            max_period,
            dyadic_depth,
            out_dir,
        } => {
            fs::create_dir_all(&out_dir)
                .map_err(|e| CliError::Data(format!("{}: {e}", out_dir.display())))?;
            let nr = build_qml_nr(max_period, dyadic_depth);
            let file = |name: &str| -> PathBuf { out_dir.join(name) };
            write_leaf_file(
                &file("kept.leaves"),
                &format_sections(&period_sections(&nr.kept)),
            )?;
            write_leaf_file(
                &file("erased.leaves"),
                &format_sections(&period_sections(&nr.erased)),
            )?;
            write_leaf_file(
                &file("vgaps.leaves"),
                &format_leaves(nr.v_gap_edges.iter().cloned()),
            )?;
            write_leaf_file(
                &file("canr.leaves"),
                &format_leaves(nr.ca_nr_edges.iter().cloned()),
            )?;
            out_line(
                stdout,
                &format!("{} kept, {} erased", nr.kept.len(), nr.erased.len()),
            )
        }
        Command::Pullback {
            leaf,
            quad,
            depth,
            out,
        } => {
            let portrait = match (leaf, quad) {
                (Some(t), _) => CriticalPortrait::critical_leaf(&angle(&t)?),
                (None, Some(q)) => {
                    let v = [angle(&q[0])?, angle(&q[1])?, angle(&q[2])?, angle(&q[3])?];
                    CriticalPortrait::quad(v).map_err(|e| CliError::Data(e.to_string()))?
                }
                (None, None) => {
                    return Err(CliError::Usage(
                        "one of --leaf or --quad is required".into(),
                    ))
                }
            };
            let l = build_pullback(&portrait, depth).map_err(|e| CliError::Data(e.to_string()))?;
            let mut text = format!("# {portrait} depth {depth}\n");
            text.push_str(&format_leaves(l.leaves().cloned()));
            write_leaf_file(&out, &text)?;
            out_line(stdout, &format!("{} leaves", l.len()))
        }
        Command::Tune { root: r, angle: t } => {
            let r = root(&r)?;
            out_line(stdout, &r.tune(&angle(&t)?).to_string())
        }
        Command::Untune { root: r, angle: t } => {
            let r = root(&r)?;
            match r.untune(&angle(&t)?) {
                Some(s) => out_line(stdout, &s.to_string()),
                None => out_line(stdout, "none"),
            }
        }
        Command::Classify { minor, limit } => {
            let m = MinorLeaf::new(chord(&minor)?).map_err(|e| CliError::Data(e.to_string()))?;
            let data = |e: &dyn std::fmt::Display| CliError::Data(e.to_string());
            if m.is_degenerate() || !is_valid_minor(m.chord()).map_err(|e| data(&e))? {
                return Err(CliError::Data(format!("{} is not a minor", m.chord())));
            }
            let ctype = component_type(&m).map_err(|e| data(&e))?;
            let fixed = is_fixed_return(&m).map_err(|e| data(&e))?;
            let ret = if fixed {
                "fixed-return"
            } else {
                "non-fixed-return"
            };
            out_line(stdout, &format!("{ctype} {ret}"))?;
            if limit {
                for class in limit_class_of_qlam(&m).map_err(|e| data(&e))? {
                    let id = class
                        .minor
                        .as_ref()
                        .map(|c| c.to_string())
                        .unwrap_or_default();
                    out_line(stdout, &format!("{id}\t{}", class.report()))?;
                }
            }
            Ok(())
        }
        Command::Hausdorff { first, second } => {
            let a = read_leaf_file(&first)?.lamination();
            let b = read_leaf_file(&second)?.lamination();
            out_line(stdout, &hausdorff_distance(&a, &b).to_string())
        }
        Command::Render {
            inputs,
            out,
            zoom,
            size,
        } => {
            let mut layers = Vec::new();
            for path in &inputs {
                layers.push((layer_name(path), read_leaf_file(path)?.leaves));
            }
            let mut style = RenderStyle {
                image_size_px: size,
                ..RenderStyle::default()
            };
            if let Some(z) = zoom {
                if z[2] <= 0.0 {
                    return Err(CliError::Usage("zoom scale must be positive".into()));
                }
                style.zoom = Zoom {
                    cx: z[0],
                    cy: z[1],
                    scale: z[2],
                };
            }
            let refs: Vec<(&str, &[Chord])> = layers
                .iter()
                .map(|(n, l)| (n.as_str(), l.as_slice()))
                .collect();
            fs::write(&out, render_svg(&refs, &style))
                .map_err(|e| CliError::Data(format!("{}: {e}", out.display())))
        }
    }
}

fn layer_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "leaves".to_string())
}
