use std::io;

fn main() {
    env_logger::init();
    let code = dsd_cli::cli_main(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
