#include <stdio.h>
#include <string.h>

#include "rayoracle.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            const char *msg = ro_last_error_message();                \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,   \
                    #cond, msg ? msg : "no message");                 \
            return 1;                                                 \
        }                                                             \
    } while (0)

static const char *SCENE =
    "bounds 4 4\n"
    "rect 0 1 0 1\n"
    "rect 0 3 2 2\n"
    "rect 1 1 3 3\n"
    "rect 3 3 3 3\n";

int main(void) {
    RoScene *scene = NULL;
    RoCircuit *naive = NULL, *logical = NULL, *toffoli = NULL;
    RoMetrics m;
    char *text = NULL;
    uint32_t onset[] = {1, 3, 7};

    CHECK(ro_scene_parse(SCENE, &scene) == RO_STATUS_OK);
    CHECK(ro_scene_len(scene) == 4);
    CHECK(ro_synthesize(scene, RO_MODE_OPTIMIZED, NULL, &logical) == RO_STATUS_OK);
    CHECK(ro_synthesize(scene, RO_MODE_NAIVE, NULL, &naive) == RO_STATUS_OK);
    CHECK(ro_circuit_qasm(naive, &text) == RO_STATUS_UNSUPPORTED);
    ro_circuit_free(naive);
    CHECK(ro_circuit_lower(logical, RO_BASIS_TOFFOLI, &toffoli) == RO_STATUS_OK);
    CHECK(ro_circuit_metrics(toffoli, &m) == RO_STATUS_OK);
    CHECK(m.qubits == 12);
    CHECK(ro_verify(toffoli, scene, NULL) == RO_STATUS_OK);
    CHECK(ro_circuit_qasm(toffoli, &text) == RO_STATUS_OK);
    CHECK(strncmp(text, "OPENQASM 2.0;", 13) == 0);
    ro_string_free(text);

    CHECK(ro_minimize(3, onset, 3, &text) == RO_STATUS_OK);
    CHECK(strcmp(text, "m(1,3) + m(3,7)") == 0);
    ro_string_free(text);

    ro_circuit_free(toffoli);
    ro_circuit_free(logical);
    ro_scene_free(scene);

    CHECK(ro_scene_parse("bounds 4 4\nrect 0 4 0 0\n", &scene) == RO_STATUS_VALIDATION);
    CHECK(ro_last_error_message() != NULL);
    puts("ok");
    return 0;
}
