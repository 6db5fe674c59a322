fn main() {
    std::process::exit(quatfield::run(std::env::args_os()));
}
