use clap::Parser;
use micromaser_cli::{execute, output, CliArgs};

fn main() {
    let args = CliArgs::parse();
    match execute(&args) {
        Ok((resolved, manifest)) => {
            if let Err(err) =
                output::print_summary(std::io::stdout().lock(), &resolved, &manifest, &args.out)
            {
                eprintln!("{err}");
                std::process::exit(1);
            }
        }
        Err(err) => {
            eprintln!("{err}");
            std::process::exit(err.exit_code());
        }
    }
}
