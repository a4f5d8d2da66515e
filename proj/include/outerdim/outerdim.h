/* outerdim C API. All strings are UTF-8 and owned by the library unless
 * stated otherwise. */
#ifndef OUTERDIM_H
#define OUTERDIM_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(OUTERDIM_BUILDING_LIBRARY)
#define OD_API __attribute__((visibility("default")))
#else
#define OD_API
#endif

typedef enum od_status {
  OD_OK = 0,
  OD_VERIFICATION_FAILED = 1,
  OD_USAGE = 2,
  OD_INFEASIBLE = 3,
  OD_INVALID_HANDLE = 10,
  OD_INTERNAL = 11
} od_status;

/* One command run: config, report and CSV artifact. */
typedef struct od_run od_run;

OD_API const char* od_version(void);

/* Number of subcommands and their names, in a fixed order. */
OD_API int od_command_count(void);
OD_API const char* od_command_name(int index);
/* Comma-separated config keys accepted by a command, or NULL. */
OD_API const char* od_command_keys(const char* command);
OD_API const char* od_usage(void);

OD_API od_run* od_run_new(void);
OD_API void od_run_free(od_run* run);

/* Runs `command` with a JSON object config (NULL means {}). The returned
 * status equals the process exit code the CLI would use. */
OD_API od_status od_run_execute(od_run* run, const char* command, const char* config_json);

/* Valid until the next execute or free. */
OD_API const char* od_run_report(const od_run* run);
OD_API const char* od_run_csv(const od_run* run);
OD_API const char* od_run_error(const od_run* run);

#ifdef __cplusplus
}
#endif

#endif /* OUTERDIM_H */
