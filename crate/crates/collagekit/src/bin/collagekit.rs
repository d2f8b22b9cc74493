fn main() {
    eprintln!("collagekit CLI is not wired up yet");
    std::process::exit(2);
}
