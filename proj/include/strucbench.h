#ifndef STRUCBENCH_H
#define STRUCBENCH_H

/* C surface of the structural-embedding benchmark toolkit. Experiments are
 * described by JSON configs (see README for the schema) and write their
 * outputs, including a manifest that reproduces the run, to a directory. */

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum sb_status {
    SB_OK = 0,
    SB_CONFIG_ERROR = 2,     /* bad config, unknown name, invalid parameter */
    SB_DATA_ERROR = 3,       /* unreadable or malformed input data */
    SB_RESOURCE_REFUSED = 4  /* input too large for an exact method */
} sb_status;

/* Runs one experiment. config_json holds a config object; on success and when
 * summary is non-NULL, *summary receives a JSON summary string to release
 * with sb_free. On failure *summary is NULL and sb_last_error() explains. */
sb_status sb_run_json(const char* config_json, char** summary);

/* Message for this thread's most recent failed call; empty after success. */
const char* sb_last_error(void);

void sb_free(char* p);

const char* sb_version(void);

/* Opaque graph handle for inspection without running a full experiment. */
typedef struct sb_graph sb_graph;

/* Edge-list file: whitespace-separated "u v" or "u v type" lines. */
sb_status sb_graph_load(const char* path, sb_graph** out);

/* Built-in synthetic family with its default parameters. */
sb_status sb_graph_generate(const char* family, unsigned long long seed, sb_graph** out);

void sb_graph_free(sb_graph* g);

int sb_graph_nodes(const sb_graph* g);
long long sb_graph_edges(const sb_graph* g);
int sb_graph_max_degree(const sb_graph* g);

#ifdef __cplusplus
}
#endif

#endif
