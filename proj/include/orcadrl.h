/* C API for the decentralized multi-agent navigation toolkit.
 *
 * All functionality is reached through an opaque config handle: set string
 * key/value options, then execute a command. Every function returns a status
 * code; orcadrl_last_message() describes the most recent failure (or carries
 * informational detail) for the calling thread.
 */
#ifndef ORCADRL_H
#define ORCADRL_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum orcadrl_status {
  ORCADRL_OK = 0,
  ORCADRL_ERROR = 1,        /* runtime failure (I/O, internal error) */
  ORCADRL_BAD_CONFIG = 2,   /* unknown key/command or invalid value */
  ORCADRL_ORACLE_FAIL = 3,  /* an oracle suite reported failures */
  ORCADRL_DIVERGED = 4,     /* training hit non-finite values */
} orcadrl_status;

typedef struct orcadrl_config orcadrl_config;

/* Library version, e.g. "1.0.0". */
const char* orcadrl_version(void);

/* Creates a config with default values; never returns NULL except on OOM. */
orcadrl_config* orcadrl_config_create(void);
void orcadrl_config_destroy(orcadrl_config* cfg);

/* Known keys: scenario, scenario_path, mode, variant, seed, episodes,
 * workers, checkpoint, out, suite, instances, and dotted override keys
 * (rewards.*, world.*, train.*). Numeric values are passed as strings. */
orcadrl_status orcadrl_config_set(orcadrl_config* cfg, const char* key,
                                  const char* value);

/* Executes one of: "train", "eval", "run", "oracle". Artifacts are written
 * under the configured output directory with a config-hash suffix. */
orcadrl_status orcadrl_execute(const orcadrl_config* cfg,
                               const char* command);

/* Thread-local detail for the last call; empty string when none. */
const char* orcadrl_last_message(void);

#ifdef __cplusplus
}
#endif

#endif /* ORCADRL_H */
