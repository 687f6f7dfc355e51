use orbifold_vertex::cli;

fn main() {
    let outcome = cli::run(std::env::args_os());
    println!("{}", outcome.output);
    std::process::exit(outcome.code);
}
