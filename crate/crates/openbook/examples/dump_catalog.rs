//! Prints the built-in catalog JSON, used to regenerate data/catalog.json.

fn main() {
    print!("{}", openbook::catalog::builtin_catalog_source());
}
