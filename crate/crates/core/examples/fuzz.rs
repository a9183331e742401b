//! Seeded random write sequences through the command-line front end.

fn main() {
    let args = [
        "womkit",
        "fuzz",
        "catalog:q4_split_25",
        "--outer",
        "catalog:c2_writes2",
        "--seed",
        "1",
        "--sequences",
        "2000",
    ];
    let code = womkit::cli::run(args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
