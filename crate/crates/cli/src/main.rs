fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let budget = std::env::var("RSL_BUDGET").ok();
    let (code, text) = rsl_cli::run(&args, budget.as_deref());
    print!("{text}");
    std::process::exit(code);
}
