fn main() {
    // Rust ignores SIGPIPE, so a downstream `head` would turn every
    // println! into an EPIPE panic. Restore the conventional death.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(starlike::cli::run());
}
