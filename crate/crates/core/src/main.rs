fn main() {
    // placeholder until the experiment harness lands
    eprintln!("momentmatch CLI: not wired up yet");
    std::process::exit(1);
}
