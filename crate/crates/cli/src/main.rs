use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nilrad_cli::session::compare;
use nilrad_cli::{examples, seed_from_env, CliError, Format, Session, Value};

#[derive(Parser)]
#[command(name = "nilrad", version, about = "Calculus with nilpotent infinitesimals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read commands interactively, or from a script file.
    Repl {
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Evaluate an expression.
    Eval {
        expr: String,
        /// A declaration such as `h in D_2` or `x = 1 + t^(1/2)`; repeatable.
        #[arg(long = "let", value_name = "DECL")]
        lets: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Taylor coefficients of an expression in one variable.
    Deriv {
        expr: String,
        #[arg(long, default_value = "x")]
        var: String,
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
        #[arg(long)]
        order: u32,
        /// Also print the derivatives i!·c_i.
        #[arg(long)]
        derivatives: bool,
        #[arg(long = "let", value_name = "DECL")]
        lets: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Compare two values: REL is eq, weak, strict or iso.
    Compare {
        #[arg(allow_hyphen_values = true)]
        lhs: String,
        rel: String,
        #[arg(allow_hyphen_values = true)]
        rhs: String,
        #[arg(long = "let", value_name = "DECL")]
        lets: Vec<String>,
    },
    /// Run a worked example.
    Example { name: String },
}

fn report(err: &CliError, source: Option<&str>) {
    let mut stderr = io::stderr().lock();
    let _ = writeln!(stderr, "error: {err}");
    if let (Some(src), Some(col)) = (source, err.column()) {
        let width = src.get(..col.min(src.len())).map_or(col, |s| s.chars().count());
        let _ = writeln!(stderr, "  {src}\n  {}^", " ".repeat(width));
    }
}

fn declare(session: &mut Session, lets: &[String]) -> Result<(), ExitCode> {
    for decl in lets {
        let cmd = format!("let {decl}");
        if let Err(e) = session.execute(&cmd) {
            report(&e, Some(&cmd));
            return Err(ExitCode::from(e.exit_code() as u8));
        }
    }
    Ok(())
}

fn new_session() -> Result<Session, ExitCode> {
    seed_from_env().map(Session::new).map_err(|e| {
        report(&e, None);
        ExitCode::from(1)
    })
}

fn one_shot(result: Result<String, CliError>, source: &str) -> ExitCode {
    match result {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            report(&e, Some(source));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn repl_interactive(session: &mut Session) -> ExitCode {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut worst = 0u8;
    let prompt = || {
        if interactive {
            print!("nilrad> ");
            let _ = io::stdout().flush();
        }
    };
    prompt();
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        for (_, cmd) in nilrad_cli::session::split_commands(&line) {
            match session.execute(&cmd) {
                Ok(reply) => {
                    if !reply.text.is_empty() {
                        println!("{}", reply.text);
                    }
                    if reply.failed {
                        worst = worst.max(2);
                    }
                }
                Err(e) => {
                    report(&e, Some(&cmd));
                    worst = worst.max(e.exit_code() as u8);
                }
            }
        }
        prompt();
    }
    ExitCode::from(worst)
}

fn repl_script(session: &mut Session, path: &PathBuf) -> ExitCode {
    let script = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            report(&CliError::Io(format!("cannot read {}: {e}", path.display())), None);
            return ExitCode::from(1);
        }
    };
    let mut failed = false;
    for (line, cmd) in nilrad_cli::session::split_commands(&script) {
        match session.execute(&cmd) {
            Ok(reply) => {
                if !reply.text.is_empty() {
                    println!("{}", reply.text);
                }
                failed |= reply.failed;
            }
            Err(e) => {
                eprintln!("{}:{line}:", path.display());
                report(&e, Some(&cmd));
                return ExitCode::from(e.exit_code() as u8);
            }
        }
    }
    if failed {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> ExitCode {
    let mut session = match new_session() {
        Ok(s) => s,
        Err(code) => return code,
    };
    match cli.command {
        Command::Repl { script: Some(path) } => repl_script(&mut session, &path),
        Command::Repl { script: None } => repl_interactive(&mut session),
        Command::Eval { expr, lets, json } => {
            if let Err(code) = declare(&mut session, &lets) {
                return code;
            }
            if json {
                session.set_format(Format::Json);
            }
            let result = session.evaluate(&expr).and_then(|v| session.render(&v));
            one_shot(result, &expr)
        }
        Command::Deriv { expr, var, at, order, derivatives, lets, json } => {
            if let Err(code) = declare(&mut session, &lets) {
                return code;
            }
            if json {
                session.set_format(Format::Json);
            }
            let result = session.derive_report(&expr, Some(&var), at, order, derivatives).map(|r| r.text);
            one_shot(result, &expr)
        }
        Command::Compare { lhs, rel, rhs, lets } => {
            if let Err(code) = declare(&mut session, &lets) {
                return code;
            }
            if !["eq", "weak", "strict", "iso"].contains(&rel.as_str()) {
                let e = CliError::Usage(format!("unknown relation `{rel}`; use eq, weak, strict or iso"));
                return one_shot(Err(e), &rel);
            }
            let side = |src: &str| -> Result<nilrad::FermatReal, CliError> {
                match session.evaluate(src)? {
                    Value::Real(x) => Ok(x),
                    Value::Weil(_) => Err(CliError::Usage("comparisons are defined on Fermat reals only".into())),
                }
            };
            let x = match side(&lhs) {
                Ok(x) => x,
                Err(e) => return one_shot(Err(e), &lhs),
            };
            one_shot(side(&rhs).map(|y| compare(&x, &rel, &y)), &rhs)
        }
        Command::Example { name } => match examples::run(&name, session_seed()) {
            Ok(report) => {
                println!("{report}");
                if report.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(2)
                }
            }
            Err(e) => {
                report(&e, None);
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}

fn session_seed() -> u64 {
    seed_from_env().unwrap_or(42)
}

fn main() -> ExitCode {
    run(Cli::parse())
}
