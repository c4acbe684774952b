fn main() {
    std::process::exit(yexp::run(std::env::args_os()));
}
