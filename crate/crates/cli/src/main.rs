fn main() {
    let run = extiso_cli::run(std::env::args_os());
    if !run.stdout.is_empty() {
        print!("{}", run.stdout);
    }
    if !run.stderr.is_empty() {
        eprint!("{}", run.stderr);
    }
    std::process::exit(run.code);
}
