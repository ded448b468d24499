//! `troptoric`: Picard groups, unit groups, and monomial divisor classes
//! of tropical toric schemes, from fan description files.
//!
//! Exit codes: 0 success, 1 validation failure on well-formed input,
//! 2 malformed input (unreadable file, bad schema, unparseable number).
//! All output is deterministic: same input bytes, same output bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use troptoric::divisor::{divisor_from_cocycle, to_file, DivisorFile, MonomialCartierDivisor};
use troptoric::fan::Fan;
use troptoric::intlin::FinGenAbGroup;
use troptoric::picard::{global_units, CechComplex};
use troptoric::tropoly::{poly_from_records, poly_to_records, TermRecord};
use troptoric::Error;

#[derive(Parser)]
#[command(
    name = "troptoric",
    version,
    about = "Picard groups and monomial divisors of tropical toric schemes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Picard group of the scheme of a fan
    Pic {
        fan: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the underlying Čech complex to this path
        #[arg(long, value_name = "OUT_JSON")]
        emit_complex: Option<PathBuf>,
    },
    /// Global monomial units: constant K^x factor and unit lattice
    Units {
        fan: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Prime spectrum of one chart monoid (faces of the cone)
    Spec {
        fan: PathBuf,
        /// Maximal cone selecting the chart
        #[arg(long, default_value_t = 0)]
        cone: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Class of a monomial Cartier divisor in the Picard group
    DivisorClass {
        fan: PathBuf,
        divisor: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide principality; prints the witness exponent when principal
    IsPrincipal {
        fan: PathBuf,
        divisor: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Lift a transition cocycle to monomial Cartier data
    LiftCocycle {
        fan: PathBuf,
        cocycle: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Replace a chart polynomial by its minimal functional representative
    Reduce {
        fan: PathBuf,
        poly: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Serialize the Čech complex of unit lattices
    EmitComplex {
        fan: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Cocycle file: ambient exponent vectors on pairs of maximal cones,
/// with omitted pairs meaning zero. Indices must satisfy i < j.
#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleFile {
    pairs: Vec<CocycleRecord>,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleRecord {
    cones: [usize; 2],
    exp: Vec<i64>,
}

/// Chart polynomial file: the maximal cone fixing the chart, plus terms.
#[derive(serde::Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
struct PolyFile {
    cone: usize,
    terms: Vec<TermRecord>,
}

struct Failure {
    file: PathBuf,
    err: Error,
}

fn fail(file: &Path, err: Error) -> Failure {
    Failure { file: file.to_path_buf(), err }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| fail(path, Error::Malformed(format!("cannot read file: {e}"))))
}

fn load_fan(path: &Path) -> Result<Fan, Failure> {
    Fan::from_json_str(&read_file(path)?).map_err(|e| fail(path, e))
}

fn group_json(g: &FinGenAbGroup) -> serde_json::Value {
    json!({
        "rank": g.rank(),
        "torsion": g.torsion().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    })
}

fn vec_json(v: &[BigInt]) -> serde_json::Value {
    json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn tuple(v: &[BigInt]) -> String {
    let mut s = String::from("(");
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{x}");
    }
    s.push(')');
    s
}

fn load_divisor(fan: &Fan, div_path: &Path) -> Result<MonomialCartierDivisor, Failure> {
    let file = DivisorFile::from_json_str(&read_file(div_path)?).map_err(|e| fail(div_path, e))?;
    // A fan referenced by path is resolved relative to the divisor file.
    let base = div_path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut resolve = |p: &str| -> Result<Fan, Error> {
        let full = base.join(p);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| Error::Malformed(format!("cannot read referenced fan {p}: {e}")))?;
        Fan::from_json_str(&text)
    };
    file.build(fan, &mut resolve).map_err(|e| fail(div_path, e))
}

fn load_cocycle(
    cx: &CechComplex,
    path: &Path,
) -> Result<Vec<Vec<BigInt>>, Failure> {
    let file: CocycleFile = serde_json::from_str(&read_file(path)?)
        .map_err(|e| fail(path, Error::Malformed(format!("cocycle file: {e}"))))?;
    let rank = cx.fan().rank();
    let mut ambient = vec![vec![BigInt::from(0); rank]; cx.pairs().len()];
    let mut seen = vec![false; cx.pairs().len()];
    for rec in &file.pairs {
        let [i, j] = rec.cones;
        if i >= j {
            return Err(fail(
                path,
                Error::Malformed(format!("pair ({i},{j}): cone indices must satisfy i < j")),
            ));
        }
        let Some(p) = cx.pair_position(i, j) else {
            return Err(fail(
                path,
                Error::Domain(format!(
                    "pair ({i},{j}) refers to a cone the fan does not have"
                )),
            ));
        };
        if seen[p] {
            return Err(fail(path, Error::Domain(format!("two records for pair ({i},{j})"))));
        }
        seen[p] = true;
        if rec.exp.len() != rank {
            return Err(fail(
                path,
                Error::Dimension(format!(
                    "pair ({i},{j}): exponent has length {}, expected {rank}",
                    rec.exp.len()
                )),
            ));
        }
        ambient[p] = rec.exp.iter().map(|&x| BigInt::from(x)).collect();
    }
    Ok(ambient)
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.cmd {
        Cmd::Pic { fan: fan_path, format, emit_complex } => {
            let fan = load_fan(&fan_path)?;
            let cx = CechComplex::build(&fan);
            if let Some(out) = emit_complex {
                let dump = cx.dump().map_err(|e| fail(&fan_path, e))?;
                let text = serde_json::to_string(&dump).expect("dump serializes");
                std::fs::write(&out, text)
                    .map_err(|e| fail(&out, Error::Malformed(format!("cannot write: {e}"))))?;
            }
            let g = cx.h1().group().clone();
            Ok(match format {
                Format::Text => format!("{g}\n"),
                Format::Json => format!("{}\n", group_json(&g)),
            })
        }
        Cmd::Units { fan: fan_path, format } => {
            let fan = load_fan(&fan_path)?;
            let g = global_units(&fan);
            Ok(match format {
                Format::Text => {
                    // The constant K^x factor is symbolic; only the
                    // monomial lattice is a finitely generated group.
                    if g.is_trivial() {
                        "K^x\n".to_string()
                    } else {
                        format!("K^x × {g}\n")
                    }
                }
                Format::Json => format!(
                    "{}\n",
                    json!({"constant_factor": "K^x", "lattice": group_json(&g)})
                ),
            })
        }
        Cmd::Spec { fan: fan_path, cone, format } => {
            let fan = load_fan(&fan_path)?;
            let c = fan
                .intersection_cone(&[cone])
                .map_err(|e| fail(&fan_path, e))?;
            let faces = fan.chart_monoid(&c).spec_faces();
            Ok(match format {
                Format::Text => {
                    let mut out = String::new();
                    for f in &faces {
                        let rays: Vec<String> =
                            f.ray_indices.iter().map(|r| r.to_string()).collect();
                        let _ = writeln!(
                            out,
                            "face {{{}}} functional {}",
                            rays.join(", "),
                            tuple(f.functional()),
                        );
                    }
                    out
                }
                Format::Json => {
                    let items: Vec<serde_json::Value> = faces
                        .iter()
                        .map(|f| {
                            json!({
                                "rays": f.ray_indices,
                                "functional": vec_json(f.functional()),
                            })
                        })
                        .collect();
                    format!("{}\n", json!({"cone": cone, "primes": items}))
                }
            })
        }
        Cmd::DivisorClass { fan: fan_path, divisor, format } => {
            let fan = load_fan(&fan_path)?;
            let cx = CechComplex::build(&fan);
            let d = load_divisor(&fan, &divisor)?;
            let cls = d.class_in_pic(&cx).map_err(|e| fail(&divisor, e))?;
            let g = cx.h1().group().clone();
            Ok(match format {
                Format::Text => {
                    if cls.torsion.is_empty() {
                        format!("{} in {g}\n", tuple(&cls.free))
                    } else {
                        format!("{} + {} in {g}\n", tuple(&cls.free), tuple(&cls.torsion))
                    }
                }
                Format::Json => format!(
                    "{}\n",
                    json!({
                        "free": vec_json(&cls.free),
                        "torsion": vec_json(&cls.torsion),
                        "group": group_json(&g),
                    })
                ),
            })
        }
        Cmd::IsPrincipal { fan: fan_path, divisor, format } => {
            let fan = load_fan(&fan_path)?;
            let cx = CechComplex::build(&fan);
            let d = load_divisor(&fan, &divisor)?;
            let witness = d.is_principal(&cx).map_err(|e| fail(&divisor, e))?;
            Ok(match format {
                Format::Text => match witness {
                    Some(m) => format!("true\nwitness {}\n", tuple(&m)),
                    None => "false\n".to_string(),
                },
                Format::Json => format!(
                    "{}\n",
                    json!({
                        "principal": witness.is_some(),
                        "witness": witness.map(|m| vec_json(&m)),
                    })
                ),
            })
        }
        Cmd::LiftCocycle { fan: fan_path, cocycle, format } => {
            let fan = load_fan(&fan_path)?;
            let cx = CechComplex::build(&fan);
            let ambient = load_cocycle(&cx, &cocycle)?;
            let d = divisor_from_cocycle(&cx, &ambient).map_err(|e| fail(&cocycle, e))?;
            let file = to_file(&d).map_err(|e| fail(&cocycle, e))?;
            Ok(match format {
                Format::Text => {
                    let mut out = String::new();
                    for rec in &file.local_data {
                        let exp: Vec<String> = rec.exp.iter().map(|x| x.to_string()).collect();
                        let _ = writeln!(
                            out,
                            "cone {}: coeff {} exp ({})",
                            rec.cone,
                            rec.coeff,
                            exp.join(", ")
                        );
                    }
                    out
                }
                Format::Json => {
                    format!("{}\n", serde_json::to_string(&file).expect("divisor serializes"))
                }
            })
        }
        Cmd::Reduce { fan: fan_path, poly, format } => {
            let fan = load_fan(&fan_path)?;
            let file: PolyFile = serde_json::from_str(&read_file(&poly)?)
                .map_err(|e| fail(&poly, Error::Malformed(format!("polynomial file: {e}"))))?;
            let c = fan
                .intersection_cone(&[file.cone])
                .map_err(|e| fail(&poly, e))?;
            let chart = fan.chart_monoid(&c);
            let p = poly_from_records(chart, &file.terms).map_err(|e| fail(&poly, e))?;
            let reduced = p.reduce_to_function();
            Ok(match format {
                Format::Text => format!("{reduced}\n"),
                Format::Json => {
                    let terms = poly_to_records(&reduced).map_err(|e| fail(&poly, e))?;
                    let out = PolyFile { cone: file.cone, terms };
                    format!("{}\n", serde_json::to_string(&out).expect("records serialize"))
                }
            })
        }
        Cmd::EmitComplex { fan: fan_path, format } => {
            let fan = load_fan(&fan_path)?;
            let dump = CechComplex::build(&fan).dump().map_err(|e| fail(&fan_path, e))?;
            Ok(match format {
                Format::Text => {
                    format!("{}\n", serde_json::to_string_pretty(&dump).expect("dump serializes"))
                }
                Format::Json => {
                    format!("{}\n", serde_json::to_string(&dump).expect("dump serializes"))
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure { file, err }) => {
            eprintln!("error: {}: {err}", file.display());
            if matches!(err, Error::Malformed(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
