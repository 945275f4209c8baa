use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use qcal_core::lattice::DEFAULT_MARGIN;
use qcal_core::oscillator::{hamiltonian_energy, CoherentForm, CoherentState};
use qcal_core::qcore::dunkl_kernel;
use qcal_core::verify::{self, Suite, SuiteConfig};
use qcal_core::{Complex64, GridFunction, HermiteFamily, LatticeGrid, QContext, TransformPlan};
use serde_json::{json, Map, Value};

use crate::args::{
    Cli, Command, CommonArgs, EvalArgs, EvalTarget, Format, TableArgs, TableKind, TransformArgs,
    ZetaArgs,
};
use crate::error::CliError;

/// Validated parameters shared by every command.
#[derive(Debug)]
pub struct RunConfig {
    pub ctx: QContext,
    pub n_max: usize,
    pub grid: LatticeGrid,
    pub seed: u64,
    pub format: Option<Format>,
    pub out: Option<std::path::PathBuf>,
}

impl RunConfig {
    pub fn from_args(a: &CommonArgs) -> Result<Self, CliError> {
        let mut ctx = QContext::new(a.q, a.alpha)?;
        if let Some(tol) = a.tol {
            ctx = ctx.with_tol(tol)?;
        }
        let grid = LatticeGrid::new(ctx, a.grid_lo, a.grid_hi, DEFAULT_MARGIN)?;
        Ok(RunConfig {
            ctx,
            n_max: a.n_max,
            grid,
            seed: a.seed,
            format: a.format,
            out: a.out.clone(),
        })
    }

    fn writer(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
            )),
            None => Box::new(BufWriter::new(std::io::stdout().lock())),
        })
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::from_args(&cli.common)?;
    match &cli.command {
        Command::Eval(a) => cmd_eval(&cfg, a),
        Command::Verify { suite } => cmd_verify(&cfg, suite),
        Command::Table(a) => cmd_table(&cfg, a),
        Command::Transform(a) => cmd_transform(&cfg, a),
    }
}

fn zeta(z: &ZetaArgs) -> Complex64 {
    Complex64::new(z.zeta, z.zeta_im)
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "NaN".into(),
        other => other.to_string(),
    }
}

pub fn cmd_eval(cfg: &RunConfig, a: &EvalArgs) -> Result<(), CliError> {
    let ctx = cfg.ctx;
    let need_x = || {
        a.x.ok_or_else(|| CliError::Usage("this target needs --x".into()))
    };
    let mut fields: Vec<(&str, Value)> = vec![
        (
            "target",
            Value::String(format!("{:?}", a.target).to_lowercase()),
        ),
        ("q", num(ctx.q())),
        ("alpha", num(ctx.alpha())),
    ];
    let fam = |n_max: usize| HermiteFamily::new(ctx, n_max);
    match a.target {
        EvalTarget::Htilde => {
            let x = need_x()?;
            let v = fam(a.n)?.eval_htilde(a.n, x)?;
            fields.extend([("n", json!(a.n)), ("x", num(x)), ("value", num(v))]);
        }
        EvalTarget::Weight => {
            let x = need_x()?;
            let v = fam(0)?.eval_weight(x)?;
            fields.extend([("x", num(x)), ("value", num(v))]);
        }
        EvalTarget::Wavefunction => {
            let x = need_x()?;
            let v = fam(a.n)?.eval_wavefunction(a.n, x)?;
            fields.extend([("n", json!(a.n)), ("x", num(x)), ("value", num(v))]);
        }
        EvalTarget::Kernel => {
            let x = need_x()?;
            let v = dunkl_kernel(&ctx, Complex64::new(a.lambda, 0.0), Complex64::new(x, 0.0))?;
            fields.extend([
                ("lambda", num(a.lambda)),
                ("x", num(x)),
                ("re", num(v.re)),
                ("im", num(v.im)),
            ]);
        }
        EvalTarget::Coherent => {
            let x = need_x()?;
            let z = zeta(&a.zeta);
            let v = CoherentState::new(ctx, z, CoherentForm::Closed)?.eval(x)?;
            fields.extend([
                ("zeta_re", num(z.re)),
                ("zeta_im", num(z.im)),
                ("x", num(x)),
                ("re", num(v.re)),
                ("im", num(v.im)),
            ]);
        }
        EvalTarget::Energy => {
            fields.extend([
                ("n", json!(a.n)),
                ("value", num(hamiltonian_energy(&ctx, a.n))),
            ]);
        }
    }
    let mut w = cfg.writer()?;
    match cfg.format {
        None => {
            let line: Vec<String> = fields
                .iter()
                .map(|(k, v)| format!("{k}={}", cell(v)))
                .collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Some(Format::Json) => {
            let obj: Map<String, Value> = fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            writeln!(w, "{}", Value::Object(obj))?;
        }
        Some(Format::Csv) => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(fields.iter().map(|(k, _)| *k))?;
            c.write_record(fields.iter().map(|(_, v)| cell(v)))?;
            c.flush()?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_verify(cfg: &RunConfig, suite: &str) -> Result<(), CliError> {
    let suite: Suite = suite.parse()?;
    if cfg.format == Some(Format::Csv) {
        return Err(CliError::Usage("verify emits JSON lines only".into()));
    }
    let sc = SuiteConfig::new(cfg.ctx, cfg.n_max, cfg.grid, cfg.seed);
    let mut reports = verify::run(suite, &sc)?;
    // failing reports go last
    reports.sort_by_key(|r| !r.pass);
    let mut w = cfg.writer()?;
    for r in &reports {
        writeln!(w, "{}", r.to_json_line())?;
    }
    w.flush()?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.check.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failed.join(", ")))
    }
}

fn parse_ns(raw: Option<&str>, n_max: usize) -> Result<Vec<usize>, CliError> {
    match raw {
        None => Ok((0..=n_max).collect()),
        Some(s) if s.trim().is_empty() => Ok(Vec::new()),
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad degree '{t}' in --ns")))
            })
            .collect(),
    }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn write(&self, w: &mut dyn Write, format: Format) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut c = csv::Writer::from_writer(w);
                c.write_record(&self.header)?;
                for row in &self.rows {
                    c.write_record(row.iter().map(cell))?;
                }
                c.flush()?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            self.header
                                .iter()
                                .zip(row)
                                .map(|(k, v)| (k.to_string(), v.clone()))
                                .collect(),
                        )
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *w, &rows)?;
                writeln!(w)?;
            }
        }
        Ok(())
    }
}

pub fn cmd_table(cfg: &RunConfig, a: &TableArgs) -> Result<(), CliError> {
    let table = match a.kind {
        TableKind::Wavefunction | TableKind::Hermite => {
            let ns = parse_ns(a.ns.as_deref(), cfg.n_max)?;
            let fam = HermiteFamily::new(cfg.ctx, ns.iter().copied().max().unwrap_or(0))?;
            if a.kind == TableKind::Wavefunction {
                let mut rows = fam.wavefunction_rows(&ns, &cfg.grid)?;
                rows.sort_by(|a, b| a.n.cmp(&b.n).then(a.x.total_cmp(&b.x)));
                Table {
                    header: vec!["n", "x", "phi"],
                    rows: rows
                        .iter()
                        .map(|r| vec![json!(r.n), num(r.x), num(r.phi)])
                        .collect(),
                }
            } else {
                let mut rows = fam.table_rows(&ns, &cfg.grid)?;
                rows.sort_by(|a, b| a.n.cmp(&b.n).then(a.x.total_cmp(&b.x)));
                Table {
                    header: vec!["n", "x", "htilde", "weight", "phi"],
                    rows: rows
                        .iter()
                        .map(|r| {
                            vec![
                                json!(r.n),
                                num(r.x),
                                num(r.htilde),
                                num(r.weight),
                                num(r.phi),
                            ]
                        })
                        .collect(),
                }
            }
        }
        TableKind::Coherent => {
            let cs = CoherentState::new(cfg.ctx, zeta(&a.zeta), CoherentForm::Closed)?;
            let mut rows = Vec::with_capacity(cfg.grid.len());
            for (s, e) in cfg.grid.points() {
                let x = cfg.grid.x(s, e);
                let v = cs.eval(x)?;
                rows.push((x, v));
            }
            rows.sort_by(|a, b| a.0.total_cmp(&b.0));
            Table {
                header: vec!["x", "re", "im"],
                rows: rows
                    .iter()
                    .map(|(x, v)| vec![num(*x), num(v.re), num(v.im)])
                    .collect(),
            }
        }
    };
    let mut w = cfg.writer()?;
    table.write(&mut *w, cfg.format.unwrap_or(Format::Csv))?;
    w.flush()?;
    Ok(())
}

fn input_format(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    }
}

pub fn cmd_transform(cfg: &RunConfig, a: &TransformArgs) -> Result<(), CliError> {
    let file =
        File::open(&a.input).map_err(|e| CliError::Io(format!("{}: {e}", a.input.display())))?;
    let reader = BufReader::new(file);
    let in_format = input_format(&a.input);
    let f = match in_format {
        Format::Csv => GridFunction::read_csv(cfg.ctx, reader, 0)?,
        Format::Json => GridFunction::read_json(cfg.ctx, reader, 0)?,
    };
    let plan = TransformPlan::new(*f.grid())?;
    let g = if a.inverse {
        plan.inverse(&f)?
    } else {
        plan.forward(&f)?
    };
    let mut w = cfg.writer()?;
    match cfg.format.unwrap_or(in_format) {
        Format::Csv => g.write_csv(&mut w)?,
        Format::Json => {
            g.write_json(&mut w)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}
