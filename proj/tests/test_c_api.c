/* Copyright 2026 The wavesched Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "wavesched/wavesched.h"

static int failures = 0;

#define EXPECT(cond)                                                 \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: EXPECT(%s) failed: %s\n", __FILE__,    \
              __LINE__, #cond, ws_last_error());                     \
      ++failures;                                                    \
    }                                                                \
  } while (0)

int main(void) {
  ws_config* cfg = NULL;
  ws_result* res = NULL;
  char* text = NULL;
  double fps = 0.0, epf = 0.0, power = 0.0;
  size_t n = 0;

  EXPECT(ws_config_create(&cfg) == WS_OK);
  EXPECT(ws_config_load(cfg, ws_default_config_path()) == WS_OK);
  EXPECT(ws_config_set(cfg, "frames", "4") == WS_OK);
  EXPECT(ws_config_set(cfg, "policy", "affinity") == WS_OK);
  EXPECT(ws_config_set(cfg, "threads", "8") == WS_OK);

  /* Errors carry a status and a message, and leave the config untouched. */
  EXPECT(ws_config_set(cfg, "speed_ratio", "0.5") == WS_ERR_CONFIG);
  EXPECT(strstr(ws_last_error(), "speed_ratio") != NULL);
  EXPECT(ws_config_set(cfg, "no_such_key", "1") == WS_ERR_CONFIG);
  EXPECT(ws_config_load(cfg, "/nonexistent.conf") == WS_ERR_CONFIG);
  EXPECT(ws_config_set(NULL, "frames", "1") == WS_ERR_ARGUMENT);
  EXPECT(ws_simulate(cfg, NULL) == WS_ERR_ARGUMENT);

  EXPECT(ws_simulate(cfg, &res) == WS_OK);
  EXPECT(strlen(ws_last_error()) == 0);
  EXPECT(ws_result_cell_count(res, &n) == WS_OK && n == 1);
  EXPECT(ws_result_metric(res, 0, "fps", &fps) == WS_OK && fps > 0.0);
  EXPECT(ws_result_metric(res, 0, "epf_j", &epf) == WS_OK);
  EXPECT(ws_result_metric(res, 0, "avg_power_w", &power) == WS_OK);
  EXPECT(fabs(fps * epf - power) <= 1e-12 * power);
  EXPECT(ws_result_metric(res, 0, "colour", &fps) == WS_ERR_ARGUMENT);
  EXPECT(ws_result_metric(res, 1, "fps", &fps) == WS_ERR_ARGUMENT);
  EXPECT(ws_result_render(res, WS_FORMAT_JSON, &text) == WS_OK);
  EXPECT(text && strstr(text, "\"kind\": \"run\"") != NULL);
  ws_string_free(text);
  ws_result_destroy(res);
  res = NULL;

  {
    const int threads[] = {1, 2};
    const char* policies[] = {"big-os", "static", "affinity"};
    const int simd[] = {0, 1};
    EXPECT(ws_sweep(cfg, threads, 2, policies, 3, simd, 2, &res) == WS_OK);
    EXPECT(ws_result_cell_count(res, &n) == WS_OK && n == 12);
    EXPECT(ws_result_render(res, WS_FORMAT_CSV, &text) == WS_OK);
    {
      int lines = 0;
      const char* p;
      for (p = text; *p; ++p) lines += *p == '\n';
      EXPECT(lines == 13);
    }
    ws_string_free(text);
    ws_result_destroy(res);
    res = NULL;

    policies[0] = "fifo";
    EXPECT(ws_sweep(cfg, threads, 2, policies, 3, simd, 2, &res) == WS_ERR_CONFIG);
  }

  /* A simulation failure inside a sweep is reported per cell. */
  {
    const int threads[] = {9};
    const char* policies[] = {"static"};
    const int simd[] = {0};
    EXPECT(ws_sweep(cfg, threads, 1, policies, 1, simd, 1, &res) == WS_OK);
    EXPECT(ws_result_metric(res, 0, "fps", &fps) == WS_ERR_SIMULATION);
    ws_result_destroy(res);
    res = NULL;
  }

  EXPECT(ws_config_serialize(cfg, &text) == WS_OK);
  {
    ws_config* copy = NULL;
    char* again = NULL;
    FILE* f = fopen("c_api_roundtrip.conf", "w");
    fputs(text, f);
    fclose(f);
    EXPECT(ws_config_create(&copy) == WS_OK);
    EXPECT(ws_config_load(copy, "c_api_roundtrip.conf") == WS_OK);
    EXPECT(ws_config_serialize(copy, &again) == WS_OK);
    EXPECT(strcmp(text, again) == 0);
    ws_string_free(again);
    ws_config_destroy(copy);
    remove("c_api_roundtrip.conf");
  }
  ws_string_free(text);

  EXPECT(ws_write_file("c_api_out.txt", "hello") == WS_OK);
  EXPECT(ws_write_file("/nonexistent/dir/out.txt", "x") == WS_ERR_IO);
  remove("c_api_out.txt");

  EXPECT(ws_config_set(cfg, "frames", "0") == WS_OK);
  EXPECT(ws_simulate(cfg, &res) == WS_ERR_CONFIG);

  ws_config_destroy(cfg);
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
