#include <metricop/metricop.hpp>

int main(int argc, char** argv) { return metricop::cli_main(argc, argv); }
