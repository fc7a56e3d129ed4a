use std::io::Write;

fn main() {
    if let Some(n) = std::env::var("CHORDAL_APPROX_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (code, out, err) = chordal_approx::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.as_bytes());
    if !err.is_empty() {
        eprintln!("{err}");
    }
    std::process::exit(code);
}
