#include <math.h>
#include <stdio.h>
#include "p2c.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "failed: %s (%s)\n", #cond, p2c_last_error()); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    P2cTrajectory *traj = NULL;
    CHECK(p2c_trajectory_new(1.5, 0.0, 0.0, 16.0, 1e-10, &traj) == P2C_STATUS_OK);
    P2cFamily fam;
    CHECK(p2c_classify(traj, 8.0, 16.0, &fam) == P2C_STATUS_OK);
    CHECK(fam.kind == P2C_FAMILY_KIND_P1);
    p2c_trajectory_free(traj);

    P2cStokes *stokes = NULL;
    CHECK(p2c_stokes_compute(1.5, 0.0, 0.0, 0.0, &stokes) == P2C_STATUS_OK);
    double re = 0.0, im = 0.0;
    CHECK(p2c_stokes_get(stokes, 2, &re, &im) == P2C_STATUS_OK);
    CHECK(fabs(im) < 1e-8 && re > 0.0);
    p2c_stokes_free(stokes);

    CHECK(p2c_predict_family(1.0, 1.0, &fam, NULL) == P2C_STATUS_DOMAIN);
    printf("ok %s\n", p2c_version());
    return 0;
}
