use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hullforge::demo;
use hullforge::report::{fragment_text, to_json, write_value, Format, Status};
use hullforge::session::{run_session_file, Session};
use hullforge_core::geometry::Domain;

#[derive(Parser)]
#[command(name = "hullforge", version, about = "Exact piecewise-linear lattice-ordered group workbench")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a session file and print its report.
    Run { session: PathBuf },
    /// Read commands from stdin, one per line, on the unit cube.
    Repl {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Cover gaps and germ facts for the curve group on the parabola.
    Parabola {
        #[arg(long, default_value_t = 8)]
        max_n: i64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let code = match cli.command {
        Command::Run { session } => match run_session_file(&session, cli.format) {
            Ok((text, code)) => {
                print!("{text}");
                code
            }
            Err(e) => {
                eprintln!("hullforge: {e}");
                2
            }
        },
        Command::Repl { dim } => repl(dim, cli.format),
        Command::Demo { which: Demo::Parabola { max_n } } => {
            if max_n < 1 {
                eprintln!("hullforge: --max-n must be at least 1");
                return ExitCode::from(2);
            }
            match demo::parabola(max_n) {
                Ok(r) => {
                    match cli.format {
                        Format::Json => print!("{}", to_json(&r.json)),
                        Format::Text => {
                            let mut out = String::new();
                            write_value(&mut out, &r.json, 0);
                            print!("{out}");
                        }
                    }
                    if r.verified {
                        0
                    } else {
                        1
                    }
                }
                Err(e) => {
                    eprintln!("hullforge: {e}");
                    1
                }
            }
        }
    };
    ExitCode::from(code as u8)
}

fn repl(dim: usize, format: Format) -> i32 {
    if dim == 0 {
        eprintln!("hullforge: --dim must be at least 1");
        return 2;
    }
    let mut session = Session::new(Domain::unit_cube(dim));
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout();
    let mut worst = 0;
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "quit" || line == "exit" {
            break;
        }
        let f = session.run_command(line);
        worst = worst.max(match f.status {
            Status::Ok => 0,
            Status::Error => 2,
            Status::VerificationFailed => 3,
        });
        let text = match format {
            Format::Json => serde_json::to_string(&f).expect("fragments serialize") + "\n",
            Format::Text => fragment_text(&f),
        };
        let _ = stdout.write_all(text.as_bytes());
        let _ = stdout.flush();
    }
    match worst {
        3 => 1,
        w => w,
    }
}
