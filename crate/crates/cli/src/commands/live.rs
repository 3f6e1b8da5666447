use std::io::{self, BufRead, BufReader, Write};
use std::net::TcpListener;
use std::thread;

use gesture_pointer::snap::SharedRegistry;

use crate::args::LiveArgs;
use crate::config::Settings;
use crate::error::{CliError, CliResult, ResultExt};
use crate::io::{lines_lossy, LineSink};
use crate::session::Session;

use super::{load_registry, session_config, workspace};

fn serve<R: BufRead, W: Write>(input: R, output: W, mut session: Session) -> io::Result<()> {
    let mut sink = LineSink::interactive(output);
    for line in lines_lossy(input) {
        for reply in session.handle_live(&line?) {
            sink.line(&reply)?;
        }
    }
    sink.flush()
}

pub fn run(args: &LiveArgs, settings: &Settings) -> CliResult<()> {
    let ws = workspace(settings)?;
    let registry = SharedRegistry::new(match &settings.registry {
        Some(_) => load_registry(settings)?,
        None => Default::default(),
    });
    let config = session_config(settings, None);

    if args.listen == "stdio" {
        let session = Session::new(ws, config, registry);
        return serve(io::stdin().lock(), io::stdout().lock(), session).or_runtime("stdio session");
    }
    let Some(addr) = args.listen.strip_prefix("tcp:") else {
        return Err(CliError::usage(format!(
            "--listen must be `stdio` or `tcp:HOST:PORT`, got {:?}",
            args.listen
        )));
    };
    let listener = TcpListener::bind(addr).or_usage(format!("binding {addr}"))?;
    let local = listener.local_addr().or_runtime("listener address")?;
    eprintln!("listening {local}");

    let mut workers = Vec::new();
    for (i, conn) in listener.incoming().enumerate() {
        let conn = conn.or_runtime("accepting connection")?;
        let peer = conn.peer_addr().map(|a| a.to_string()).unwrap_or_default();
        let reader = conn.try_clone().or_runtime("cloning connection")?;
        let session = Session::new(ws.clone(), config.clone(), registry.clone());
        log::info!("session {i} opened by {peer}");
        workers.push(thread::spawn(move || {
            if let Err(e) = serve(BufReader::new(reader), conn, session) {
                log::warn!("session {i} ({peer}) ended: {e}");
            }
        }));
        if args.max_connections.is_some_and(|m| i + 1 >= m) {
            break;
        }
    }
    for w in workers {
        w.join().map_err(|_| CliError::runtime("session thread panicked"))?;
    }
    Ok(())
}
