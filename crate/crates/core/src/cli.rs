//! Command implementations behind the `fdiagram` binary. Each command writes
//! to the given streams and returns the process exit status: 0 on success,
//! 1 on a semantic failure, 2 on an I/O or syntax error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::codegen::{self, Dialect, EmittedUnit};
use crate::dsl::{self, Diagnostic, Expectation, Mutation, Pos};
use crate::engine::{Outcome, Session, Violation};
use crate::model::{classify_constraint, ConstraintClass, Schema, Side};
use crate::oracle::full_check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEMANTIC: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fdiagram",
    version,
    about = "Commutative and anti-commutative function diagram constraints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a schema and classify its constraints.
    Validate {
        schema: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Replay a mutation script under constraint enforcement.
    Run {
        schema: PathBuf,
        script: PathBuf,
        #[arg(long)]
        json: bool,
        /// Halt at the first rejected mutation.
        #[arg(long)]
        stop_on_reject: bool,
    },
    /// Apply a script without enforcement, then re-check every constraint.
    Check {
        schema: PathBuf,
        script: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Emit enforcement code.
    Gen {
        schema: PathBuf,
        #[arg(long)]
        constraint: Option<String>,
        #[arg(long, value_enum, default_value_t = What::All)]
        what: What,
        #[arg(long, value_enum, default_value_t = DialectArg::PaperStyle)]
        dialect: DialectArg,
        /// Write one file per unit into this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    RowSources,
    DomainCheck,
    LinkChecks,
    All,
    /// `CREATE TABLE` statements for the whole schema.
    Ddl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DialectArg {
    PaperStyle,
    GenericSql,
}

impl From<DialectArg> for Dialect {
    fn from(d: DialectArg) -> Self {
        match d {
            DialectArg::PaperStyle => Dialect::PaperStyle,
            DialectArg::GenericSql => Dialect::GenericSql,
        }
    }
}

/// Runs `cli`, writing normal output to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Validate { schema, json } => cmd_validate(&schema, json, out, err),
        Command::Run {
            schema,
            script,
            json,
            stop_on_reject,
        } => cmd_run(&schema, &script, json, stop_on_reject, out, err),
        Command::Check {
            schema,
            script,
            json,
        } => cmd_check(&schema, &script, json, out, err),
        Command::Gen {
            schema,
            constraint,
            what,
            dialect,
            out: dir,
        } => cmd_gen(
            &schema,
            constraint.as_deref(),
            what,
            dialect.into(),
            dir.as_deref(),
            out,
            err,
        ),
    };
    match result {
        Ok(code) => code,
        // A reader that stopped early (`| head`) is not an input error.
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn read(path: &Path) -> io::Result<String> {
    fs::read_to_string(path)
        .map_err(|e| io::Error::new(e.kind(), format!("cannot read {}: {e}", path.display())))
}

fn exit_for(diagnostics: &[Diagnostic]) -> i32 {
    if diagnostics.iter().any(|d| d.code.is_syntactic()) {
        EXIT_INPUT
    } else {
        EXIT_SEMANTIC
    }
}

/// Parses the schema at `path`, reporting diagnostics on failure.
fn load_schema(path: &Path, err: &mut dyn Write) -> io::Result<Result<Arc<Schema>, i32>> {
    let source = read(path)?;
    Ok(match dsl::parse_schema(&source) {
        Ok(schema) => Ok(Arc::new(schema)),
        Err(diagnostics) => {
            err.write_all(dsl::render(&path.display().to_string(), &diagnostics).as_bytes())?;
            Err(exit_for(&diagnostics))
        }
    })
}

fn load_script(
    path: &Path,
    schema: &Schema,
    err: &mut dyn Write,
) -> io::Result<Result<Vec<(Pos, Mutation)>, i32>> {
    let source = read(path)?;
    Ok(match dsl::parse_script_spanned(&source, schema) {
        Ok(script) => Ok(script),
        Err(diagnostics) => {
            err.write_all(dsl::render(&path.display().to_string(), &diagnostics).as_bytes())?;
            Err(exit_for(&diagnostics))
        }
    })
}

pub fn cmd_validate(
    path: &Path,
    as_json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let source = read(path)?;
    match dsl::parse_schema(&source) {
        Ok(schema) => {
            let constraints: Vec<Json> = schema
                .constraints()
                .iter()
                .map(|c| {
                    json!({
                        "id": c.id,
                        "class": ConstraintClass::General.as_str(),
                        "kind": c.kind.as_str(),
                        "domain": schema.set(c.domain).name,
                        "left": schema.chain_text(&c.left),
                        "right": schema.chain_text(&c.right),
                    })
                })
                .collect();
            if as_json {
                let doc = json!({
                    "valid": true,
                    "schema": schema.name,
                    "sets": schema.sets().len(),
                    "constraints": constraints,
                    "diagnostics": [],
                });
                writeln!(out, "{doc}")?;
            } else {
                writeln!(
                    out,
                    "ok: schema {} ({} sets, {} constraint(s))",
                    schema.name,
                    schema.sets().len(),
                    schema.constraints().len()
                )?;
                for c in schema.constraints() {
                    writeln!(
                        out,
                        "  {}: {} {} on {}: {} | {}",
                        c.id,
                        ConstraintClass::General,
                        c.kind.as_str(),
                        schema.set(c.domain).name,
                        schema.chain_text(&c.left),
                        schema.chain_text(&c.right)
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Err(diagnostics) => {
            if as_json {
                let doc = json!({ "valid": false, "diagnostics": diagnostics });
                writeln!(out, "{doc}")?;
            }
            err.write_all(dsl::render(&path.display().to_string(), &diagnostics).as_bytes())?;
            Ok(exit_for(&diagnostics))
        }
    }
}

/// Outcome of one replayed mutation.
struct Record {
    index: usize,
    line: usize,
    statement: String,
    mutation: Mutation,
    outcome: Outcome,
    violations: Vec<Violation>,
}

impl Record {
    fn expectation_met(&self) -> Option<bool> {
        self.mutation.expectation.map(|e| match e {
            Expectation::Accept => self.outcome == Outcome::Applied,
            Expectation::Reject => self.outcome == Outcome::Rejected,
        })
    }

    fn store_error(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::Store(_)))
    }

    fn to_json(&self, schema: &Schema) -> Json {
        json!({
            "index": self.index,
            "line": self.line,
            "action": self.mutation.action.as_str(),
            "set": schema.set(self.mutation.set).name,
            "statement": self.statement,
            "verdict": self.outcome.as_str(),
            "violations": self.violations.iter().map(|v| v.to_json(schema)).collect::<Vec<_>>(),
            "expectation": self.mutation.expectation.map(Expectation::as_str),
            "expectation_met": self.expectation_met(),
        })
    }
}

pub fn cmd_run(
    schema_path: &Path,
    script_path: &Path,
    as_json: bool,
    stop_on_reject: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let schema = match load_schema(schema_path, err)? {
        Ok(schema) => schema,
        Err(code) => return Ok(code),
    };
    let script = match load_script(script_path, &schema, err)? {
        Ok(script) => script,
        Err(code) => return Ok(code),
    };

    let mut session = Session::new(Arc::clone(&schema));
    let mut records = Vec::new();
    for (index, (pos, m)) in script.into_iter().enumerate() {
        let verdict = session.apply(&m);
        let rejected = verdict.outcome == Outcome::Rejected;
        records.push(Record {
            index: index + 1,
            line: pos.line,
            statement: dsl::print_mutation(&schema, &m),
            mutation: m,
            outcome: verdict.outcome,
            violations: verdict.violations,
        });
        if rejected && stop_on_reject {
            break;
        }
    }

    let applied = records
        .iter()
        .filter(|r| r.outcome == Outcome::Applied)
        .count();
    let met = records
        .iter()
        .filter(|r| r.expectation_met() == Some(true))
        .count();
    let failed = records
        .iter()
        .filter(|r| r.expectation_met() == Some(false))
        .count();
    // A store error is a failure unless the statement expected rejection.
    let store_errors = records
        .iter()
        .filter(|r| r.store_error() && r.mutation.expectation.is_none())
        .count();
    let inspected = session.db().rows_inspected();

    if as_json {
        let doc = json!({
            "mutations": records.iter().map(|r| r.to_json(&schema)).collect::<Vec<_>>(),
            "totals": {
                "mutations": records.len(),
                "applied": applied,
                "rejected": records.len() - applied,
                "expectations_met": met,
                "expectations_failed": failed,
                "store_errors": store_errors,
            },
            "counters": { "rows_inspected": inspected },
        });
        writeln!(out, "{doc}")?;
    } else {
        for r in &records {
            let expectation = match (r.mutation.expectation, r.expectation_met()) {
                (Some(e), Some(true)) => format!(" (expected {}: ok)", e.as_str()),
                (Some(e), _) => format!(" (expected {}: FAILED)", e.as_str()),
                (None, _) => String::new(),
            };
            writeln!(
                out,
                "#{} line {}: {} -> {}{expectation}",
                r.index, r.line, r.statement, r.outcome
            )?;
            for v in &r.violations {
                writeln!(out, "    {}", v.line(&schema))?;
            }
        }
        writeln!(
            out,
            "{} mutations: {} applied, {} rejected; expectations: {} met, {} failed",
            records.len(),
            applied,
            records.len() - applied,
            met,
            failed
        )?;
        writeln!(out, "rows inspected: {inspected}")?;
    }
    Ok(if failed > 0 || store_errors > 0 {
        EXIT_SEMANTIC
    } else {
        EXIT_OK
    })
}

pub fn cmd_check(
    schema_path: &Path,
    script_path: &Path,
    as_json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let schema = match load_schema(schema_path, err)? {
        Ok(schema) => schema,
        Err(code) => return Ok(code),
    };
    let script = match load_script(script_path, &schema, err)? {
        Ok(script) => script,
        Err(code) => return Ok(code),
    };
    let mut session = Session::new(Arc::clone(&schema));
    let mut store_errors = Vec::new();
    for (pos, m) in &script {
        if let Err(e) = session.apply_unchecked(m) {
            store_errors.push((pos.line, Violation::Store(e)));
        }
    }
    let report = full_check(session.db());
    let violations: Vec<Violation> = report
        .violations
        .iter()
        .cloned()
        .map(Violation::Constraint)
        .collect();
    if as_json {
        let doc = json!({
            "store_errors": store_errors
                .iter()
                .map(|(line, v)| json!({ "line": line, "error": v.to_json(&schema) }))
                .collect::<Vec<_>>(),
            "violations": violations.iter().map(|v| v.to_json(&schema)).collect::<Vec<_>>(),
            "rows_scanned": report.rows_scanned,
        });
        writeln!(out, "{doc}")?;
    } else {
        for (line, v) in &store_errors {
            writeln!(out, "line {line}: {}", v.line(&schema))?;
        }
        for v in &violations {
            writeln!(out, "{}", v.line(&schema))?;
        }
        writeln!(
            out,
            "{} violations over {} rows scanned",
            violations.len(),
            report.rows_scanned
        )?;
    }
    Ok(if violations.is_empty() && store_errors.is_empty() {
        EXIT_OK
    } else {
        EXIT_SEMANTIC
    })
}

pub fn cmd_gen(
    schema_path: &Path,
    constraint: Option<&str>,
    what: What,
    dialect: Dialect,
    dir: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let schema = match load_schema(schema_path, err)? {
        Ok(schema) => schema,
        Err(code) => return Ok(code),
    };
    if what == What::Ddl {
        let body = codegen::gen_ddl(&schema);
        match dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(format!("{}.ddl.sql", schema.name));
                fs::write(&path, body)?;
                writeln!(out, "{}", path.display())?;
            }
            None => out.write_all(body.as_bytes())?,
        }
        return Ok(EXIT_OK);
    }
    let selected: Vec<_> = match constraint {
        Some(id) => match schema.constraint(id) {
            Some(c) => vec![c],
            None => {
                writeln!(err, "error: no constraint `{id}` in schema {}", schema.name)?;
                return Ok(EXIT_SEMANTIC);
            }
        },
        None => schema.constraints().iter().collect(),
    };
    let mut units: Vec<EmittedUnit> = Vec::new();
    for c in selected {
        match what {
            What::RowSources => units.extend(
                [Side::Left, Side::Right]
                    .into_iter()
                    .filter_map(|side| codegen::gen_row_source(&schema, c, side, dialect)),
            ),
            What::DomainCheck => units.push(codegen::gen_domain_check(&schema, c, dialect)),
            What::LinkChecks => units.extend(codegen::gen_link_checks(&schema, c, dialect)),
            What::All => units.extend(codegen::gen_all(&schema, c, dialect)),
            What::Ddl => unreachable!(),
        }
    }
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for unit in &units {
                let path = dir.join(unit.file_name(&schema));
                fs::write(&path, &unit.body)?;
                writeln!(out, "{}", path.display())?;
            }
        }
        None => {
            for (i, unit) in units.iter().enumerate() {
                if i > 0 {
                    writeln!(out, "---")?;
                }
                out.write_all(unit.body.as_bytes())?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// Classification of every constraint in a schema source, refused ones
/// included. `None` when the source does not get as far as constraints.
pub fn classify_source(source: &str) -> Option<Vec<(String, ConstraintClass)>> {
    let (raw, _) = dsl::parse_raw_schema(source).ok()?;
    let mut stripped = raw.clone();
    stripped.constraints.clear();
    let schema = Schema::build(&stripped).ok()?;
    Some(
        raw.constraints
            .iter()
            .filter_map(|c| {
                crate::model::resolve_constraint(&schema, c)
                    .ok()
                    .map(|candidate| (c.id.clone(), classify_constraint(&candidate)))
            })
            .collect(),
    )
}
