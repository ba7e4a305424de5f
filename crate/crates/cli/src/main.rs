use std::process::ExitCode;

use clap::Parser;
use poisson_cli::{render, run_text, CliError, Command, Flags};

/// Exact Poisson cohomology, Maurer–Cartan and deformation computations.
///
/// Usage: poisson [FLAGS] COMMAND [NUMBERS...] FILE
///
/// Commands: check-poisson, hp-affine i [D], hp-cech i [W], sections q [W],
/// glue-check, ks-class, mc-solve [N], jacobi [n], base-ring [n], morphic,
/// pt0 [D], pt1 [D], fod [D].
#[derive(Parser, Debug)]
#[command(name = "poisson", version, about, long_about = None)]
struct Args {
    /// starting exponent window for Čech computations
    #[arg(long, allow_negative_numbers = true)]
    window: Option<i32>,
    /// largest window tried before giving up on stabilization
    #[arg(long)]
    max_window: Option<i32>,
    /// coefficient-degree bound for affine computations
    #[arg(long)]
    degree: Option<i32>,
    /// truncation order for series computations
    #[arg(long)]
    order: Option<u32>,
    /// read bivector coefficients as ordered-pair (i<j) coefficients
    #[arg(long)]
    ordered_pairs: bool,
    /// seed for randomized checks
    #[arg(long)]
    seed: Option<u64>,
    /// the command name
    command: String,
    /// numeric arguments followed by the problem file
    #[arg(required = true, num_args = 1..)]
    rest: Vec<String>,
}

fn fail(e: CliError) -> ExitCode {
    print!("{}", render(&e.to_json()));
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (file, nums) = args.rest.split_last().expect("clap enforces one value");
    let cmd = match Command::from_args(&args.command, nums) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return fail(CliError::Io { path: file.clone(), message: e.to_string() }),
    };
    let flags = Flags {
        window: args.window,
        max_window: args.max_window,
        degree: args.degree,
        order: args.order,
        ordered_pairs: args.ordered_pairs,
        seed: args.seed,
    };
    match run_text(&cmd, &text, &flags) {
        Ok(o) => {
            print!("{}", render(&o.report));
            eprintln!("{}", o.summary);
            ExitCode::from(o.exit_code as u8)
        }
        Err(e) => fail(e),
    }
}
