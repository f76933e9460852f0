use env_logger::Env;

fn main() {
    env_logger::Builder::from_env(Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    std::process::exit(mousedyn::cli::main_impl(std::env::args_os()));
}
