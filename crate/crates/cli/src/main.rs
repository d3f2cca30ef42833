fn main() {
    let outcome = nonlocal_cli::run(std::env::args_os());
    let text = outcome.rendered();
    if outcome.exit_code >= nonlocal_cli::EXIT_INVALID {
        eprint!("{text}");
    } else {
        print!("{text}");
        if !text.ends_with('\n') {
            println!();
        }
    }
    std::process::exit(outcome.exit_code);
}
