fn main() {
    let env = mlint::cli::Env::current();
    let code = mlint::cli::main_with(
        std::env::args_os(),
        &env,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
