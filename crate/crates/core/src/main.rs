use std::path::PathBuf;
use std::process::ExitCode;

fn main() -> ExitCode {
    let config = std::env::var_os(gvkit::cli::CONFIG_ENV).map(PathBuf::from);
    let code = gvkit::cli::run(
        std::env::args_os(),
        config.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
