#include <stdio.h>
#include <string.h>
#include "sullivan.h"

int main(void) {
    SullivanModel *m = NULL;
    if (sullivan_model_parse("generator x 2\ngenerator y 5\nd y = x^3\n", &m) != SULLIVAN_STATUS_OK) {
        return 10;
    }
    if (sullivan_model_generator_count(m) != 2) return 11;
    if (sullivan_model_validate(m) != SULLIVAN_STATUS_OK) return 12;

    size_t dims[8];
    size_t written = 0;
    if (sullivan_cohomology_dims(m, 4, dims, 8, &written) != SULLIVAN_STATUS_OK) return 13;
    size_t want[5] = {1, 0, 1, 0, 1};
    if (written != 5 || memcmp(dims, want, sizeof want) != 0) return 14;

    uint32_t formula = 0, direct = 0;
    if (sullivan_toomer(m, &formula, &direct) != SULLIVAN_STATUS_OK) return 15;
    if (formula != 2 || direct != 2) return 16;

    char *record = NULL;
    if (sullivan_check_record(m, &record) != SULLIVAN_STATUS_OK) return 17;
    if (strstr(record, "\"HOLDS_VIA_TRUNCATED_POLY\"") == NULL) return 18;
    sullivan_string_free(record);
    sullivan_model_free(m);

    SullivanModel *bad = NULL;
    if (sullivan_model_parse("generator x 2\nd y = x\n", &bad) != SULLIVAN_STATUS_PARSE_ERROR) return 19;
    if (bad != NULL || sullivan_last_error_message() == NULL) return 20;

    printf("ok %s\n", sullivan_version());
    return 0;
}
