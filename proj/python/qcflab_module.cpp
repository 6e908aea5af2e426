#include <pybind11/pybind11.h>
PYBIND11_MODULE(_qcflab, m) { m.doc() = "placeholder"; }
