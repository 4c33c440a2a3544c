//! Exports a planar member of a code family as a JSON code file and an
//! alist parity-check matrix, then reads the JSON back.
//!
//! Run: cargo run --release --example export_code -- 2 4

use ldpc_cat::lattice::{table1_family, write_alist, CodeFile};

fn main() -> ldpc_cat::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (row, ell) = match args.as_slice() {
        [r, e, ..] => (*r, *e),
        _ => (2, 4),
    };
    let fam = table1_family(row)?;
    let code = fam.planar_code(ell);

    let dir = std::env::temp_dir();
    let json = dir.join(format!("{}-ell{ell}-planar.json", fam.name()));
    let alist = dir.join(format!("{}-ell{ell}-planar.alist", fam.name()));
    std::fs::write(&json, CodeFile::from(&code).to_json()?)?;
    write_alist(&code, std::fs::File::create(&alist)?)?;

    let back = CodeFile::from_json(&std::fs::read_to_string(&json)?)?.to_code()?;
    assert_eq!((back.n(), back.k()), (code.n(), code.k()));
    println!("[{}, {}] planar code with {} checks", code.n(), code.k(), code.num_checks());
    println!("wrote {} and {}", json.display(), alist.display());
    Ok(())
}
