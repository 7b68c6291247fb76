fn main() {
    // Placeholder driver; the script runner lands with the surface syntax.
    eprintln!("fincat: no script given");
    std::process::exit(2);
}
