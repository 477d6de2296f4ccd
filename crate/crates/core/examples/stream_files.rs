// The text stream format and the command line, driven in-process.

use std::error::Error;

use dense_streams::cli::{self, StreamFile};
use dense_streams::generators::erdos_renyi;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = erdos_renyi(8, 0.5, 1)?;
    let text = StreamFile::from_graph(&g)?.to_text();
    println!(
        "{} edge records, first: {:?}",
        text.lines().count(),
        text.lines().next()
    );
    let back = StreamFile::parse(&text)?.to_graph(Some(8))?;
    assert_eq!(back.edges(), g.edges());

    let dir = std::env::temp_dir().join(format!("dense-streams-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("graph.txt");
    std::fs::write(&path, &text)?;

    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = [
        "dense-streams",
        "--format",
        "csv",
        "maxcut",
        "--n",
        "8",
        "--oracle",
        "--input",
    ];
    let code = cli::run(
        args.iter()
            .map(|s| s.to_string())
            .chain([path.display().to_string()]),
        &mut out,
        &mut err,
    );
    print!("{}", String::from_utf8(out)?);
    eprint!("{}", String::from_utf8(err)?);
    std::fs::remove_dir_all(&dir)?;
    if code != cli::EXIT_OK {
        return Err(format!("exit code {code}").into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
