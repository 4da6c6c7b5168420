#include <stdio.h>
#include "semiisac.h"

int main(void) {
    SemiIsacConfig *cfg = NULL;
    if (semiisac_config_from_preset("paper-sec6", &cfg) != SEMI_ISAC_STATUS_OK) {
        fprintf(stderr, "%s\n", semiisac_last_error());
        return 1;
    }
    double op = 0.0, reir = 0.0;
    if (semiisac_eval(cfg, "noma-semi-i", "op", SEMIISAC_USER_R, &op) != SEMI_ISAC_STATUS_OK ||
        semiisac_eval(cfg, "oma-semi", "reir", SEMIISAC_USER_NONE, &reir) != SEMI_ISAC_STATUS_OK) {
        fprintf(stderr, "%s\n", semiisac_last_error());
        semiisac_config_free(cfg);
        return 1;
    }
    int code = semiisac_eval(cfg, "oma-semi", "nope", SEMIISAC_USER_C, &op);
    printf("%.17g %.17g %d\n", op, reir, code);
    semiisac_config_free(cfg);
    return 0;
}
