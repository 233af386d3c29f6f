use std::env;
use std::path::PathBuf;

use cbindgen::{Config, EnumConfig, ExportConfig, Language, RenameRule};

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");

    let config = Config {
        language: Language::C,
        include_guard: Some("SPECTRA_LAB_H".into()),
        cpp_compat: true,
        usize_is_size_t: true,
        documentation: true,
        autogen_warning: Some("/* Generated by cbindgen. Do not edit. */".into()),
        enumeration: EnumConfig {
            rename_variants: RenameRule::QualifiedScreamingSnakeCase,
            ..Default::default()
        },
        export: ExportConfig {
            include: vec!["SlStatus".into()],
            ..Default::default()
        },
        ..Default::default()
    };

    cbindgen::Builder::new()
        .with_config(config)
        .with_crate(&crate_dir)
        .generate()
        .expect("unable to generate C bindings")
        .write_to_file(crate_dir.join("include").join("spectra_lab.h"));
}
