use std::sync::Arc;
use std::time::Duration;

use staging_manager::{http, InteractionManager};

use crate::{read, CliError, ServeArgs};

pub fn serve(args: &ServeArgs) -> Result<(), CliError> {
    let manager = Arc::new(InteractionManager::new(args.config()));
    for path in &args.preload {
        let summary = manager
            .ingest_site(&read(path)?)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        eprintln!("loaded {} as {}", path.display(), summary.site_id);
    }
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&args.listen).await?;
        eprintln!("listening on {}", listener.local_addr()?);
        let sweeper = manager.clone();
        tokio::spawn(async move {
            let mut tick = tokio::time::interval(Duration::from_secs(60));
            loop {
                tick.tick().await;
                sweeper.purge_expired();
            }
        });
        http::serve(listener, manager).await
    })?;
    Ok(())
}
