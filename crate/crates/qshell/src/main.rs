use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quantum_plane::qcurvature::{curvature, default_samples, flatness_report};
use quantum_plane::shell::{
    parse_rational, render, OutputFormat, Session, SessionConfig, ShellError, Value,
};
use quantum_plane::{Hamiltonian, QElement};

/// Exact calculator for the q-deformed quantum plane.
#[derive(Parser)]
#[command(name = "qshell", version)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Output format: text, json or latex.
    #[arg(long, global = true, env = "QSHELL_FORMAT", default_value = "text")]
    format: OutputFormat,
    /// Specialize results at this rational value of q, e.g. 1/2.
    #[arg(long, global = true, value_parser = parse_rational)]
    q: Option<num_rational::BigRational>,
    /// Exponent m of the mixed term (q^m - 1) p ∂p in the ∂x x rule.
    #[arg(
        long,
        global = true,
        default_value_t = 2,
        allow_negative_numbers = true
    )]
    mixed_exponent: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one expression.
    Eval {
        expr: String,
        /// Hamiltonian, bound to the session variable H.
        #[arg(long = "H")]
        h: Option<String>,
    },
    /// Interactive session reading expressions from stdin.
    Repl,
    /// Run script files, one expression or binding per line.
    Run { files: Vec<PathBuf> },
    /// Curvature of f under H with a q -> 1 flatness report.
    Curvature {
        #[arg(long)]
        f: String,
        #[arg(long = "H")]
        h: String,
        /// Comma-separated increasing rationals below or above 1.
        #[arg(long)]
        samples: Option<String>,
        /// Write the flatness report to a .csv or .json file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the engine's commutator part with the printed closed form.
    Compare314 {
        #[arg(long)]
        f: String,
    },
}

impl GlobalOpts {
    fn session_config(&self) -> SessionConfig {
        SessionConfig {
            mixed_term_exponent: self.mixed_exponent,
            output_format: self.format,
            numeric_q: self.q.clone(),
        }
    }
}

fn fail(err: &ShellError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(err.exit_code() as u8)
}

fn element(session: &Session, src: &str) -> Result<QElement, ShellError> {
    // Inputs to report commands stay symbolic in q.
    let symbolic = Session::new(SessionConfig {
        numeric_q: None,
        ..session.config.clone()
    });
    symbolic.eval_element(src)
}

fn parse_samples(s: &str) -> Result<Vec<num_rational::BigRational>, ShellError> {
    s.split(',')
        .map(|t| parse_rational(t).map_err(ShellError::Usage))
        .collect()
}

fn write_report(path: &Path, body: String) -> Result<(), ShellError> {
    fs::write(path, body)
        .map_err(|e| ShellError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_curvature(
    session: &Session,
    f: &str,
    h: &str,
    samples: Option<&str>,
    out: Option<&Path>,
) -> Result<String, ShellError> {
    let f = element(session, f)?;
    let h = Hamiltonian::new(element(session, h)?);
    let cfg = session.config.calculus();
    let samples = match samples {
        Some(s) => parse_samples(s)?,
        None => default_samples(),
    };
    let report = flatness_report(&f, &h, &cfg, &samples).map_err(|error| ShellError::Math {
        error,
        line: 1,
        col: 1,
    })?;
    if let Some(path) = out {
        let body = match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => report.to_csv(),
            Some("json") => serde_json::to_string_pretty(&report.to_json()).expect("json") + "\n",
            _ => return Err(ShellError::Usage("--out must end in .csv or .json".into())),
        };
        write_report(path, body)?;
    }
    let result = curvature(&f, &h, &cfg);
    Ok(match session.config.output_format {
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "curvature": result.to_json(),
                "flatness": report.to_json(),
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        _ => format!(
            "# {}\n{}{}",
            session.config.header(),
            result.to_text(),
            report.to_table()
        ),
    })
}

fn cmd_compare(session: &Session, f: &str) -> Result<String, ShellError> {
    let f = element(session, f)?;
    let report = quantum_plane::qcalculus::compare_3_14(&f, &session.config.calculus());
    Ok(render(&Value::Comparison(report), &session.config))
}

fn repl(mut session: Session) -> ExitCode {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    let mut stdout = io::stdout();
    if interactive {
        println!(
            "# {}  (:help for commands, :quit to leave)",
            session.config.header()
        );
    }
    loop {
        if interactive {
            print!("qshell> ");
            let _ = stdout.flush();
        }
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) | Err(_) => break,
            Ok(_) => {}
        }
        if matches!(line.trim(), ":quit" | ":exit") {
            break;
        }
        match session.execute_line(&line) {
            Ok(Some(out)) => print!("{out}"),
            Ok(None) => {}
            Err(e) => eprintln!("error: {e}"),
        }
    }
    ExitCode::SUCCESS
}

fn run_files(config: &SessionConfig, files: &[PathBuf]) -> ExitCode {
    let mut worst = 0u8;
    for path in files {
        let src = match fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                worst = worst.max(1);
                continue;
            }
        };
        let mut session = Session::new(config.clone());
        for (n, line) in src.lines().enumerate() {
            match session.execute_line(line) {
                Ok(Some(out)) => print!("{out}"),
                Ok(None) => {}
                Err(e) => {
                    eprintln!("{}:{}: error: {e}", path.display(), n + 1);
                    worst = worst.max(e.exit_code() as u8);
                    break;
                }
            }
        }
    }
    ExitCode::from(worst)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut session = Session::new(cli.opts.session_config());
    let result = match &cli.command {
        Command::Eval { expr, h } => (|| {
            if let Some(h) = h {
                let h = element(&session, h)?;
                session.bind("H", h);
            }
            Ok(render(&session.eval_str(expr)?, &session.config))
        })(),
        Command::Repl => return repl(session),
        Command::Run { files } => return run_files(&session.config, files),
        Command::Curvature { f, h, samples, out } => {
            cmd_curvature(&session, f, h, samples.as_deref(), out.as_deref())
        }
        Command::Compare314 { f } => cmd_compare(&session, f),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
