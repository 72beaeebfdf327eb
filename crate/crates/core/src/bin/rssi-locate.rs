fn main() {
    std::process::exit(rssi_locate::cli::run(std::env::args_os()));
}
