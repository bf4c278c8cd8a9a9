fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    cbindgen::generate(&dir)
        .expect("could not generate C header")
        .write_to_file(format!("{dir}/include/kerr_fvr.h"));
}
