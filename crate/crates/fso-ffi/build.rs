use std::env;
use std::fs;
use std::path::PathBuf;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header_path = crate_dir.join("include").join("fso.h");

    let header = match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            let mut buf = Vec::new();
            bindings.write(&mut buf);
            buf
        }
        Err(err) => panic!("cbindgen failed: {err}"),
    };

    // write only when the content changed, so the committed header does not
    // churn and cargo does not rebuild in a loop
    let unchanged = fs::read(&header_path)
        .map(|existing| existing == header)
        .unwrap_or(false);
    if !unchanged {
        fs::create_dir_all(header_path.parent().unwrap()).unwrap();
        fs::write(&header_path, header).unwrap();
    }
}
