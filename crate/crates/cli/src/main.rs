use std::io::Write;

use anyhow::Context;

fn main() -> anyhow::Result<()> {
    let outcome = qvl_cli::run_command(std::env::args_os());
    std::io::stdout()
        .write_all(outcome.stdout.as_bytes())
        .context("writing report")?;
    std::io::stderr().write_all(outcome.stderr.as_bytes()).context("writing diagnostics")?;
    std::process::exit(outcome.code);
}
