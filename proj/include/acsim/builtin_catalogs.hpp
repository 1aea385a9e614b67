#pragma once

// Shipped narration catalogs, stored in the catalog file format.

#include <array>
#include <string_view>

namespace acsim {

inline constexpr std::string_view kCatalogEn = R"json({
  "locale": "en",
  "templates": {
    "fetch.addr": "The Program Counter ({pc}) is placed on the Address bus.",
    "fetch.opcode": "The word {hex} travels on the Data bus into the Instruction Register, and the Program Counter advances to {pc}.",
    "fetch.operand_addr": "The Program Counter ({pc}) is placed on the Address bus to fetch the operand.",
    "fetch.operand": "The operand {value} is copied into the Instruction Register, and the Program Counter advances to {pc}.",
    "decode": "The Control Unit decodes the instruction {text} ({mode} addressing).",
    "decode.illegal": "The word {hex} is not a valid instruction, so the CPU stops with a fault.",
    "exec.read": "The operand address {addr} goes on the Address bus, and memory returns {value} on the Data bus.",
    "exec.load": "The Accumulator is loaded with {value}.",
    "exec.alu": "The ALU computes {left} {mnemonic} {right}; the Accumulator now holds {result}.",
    "exec.compare": "The ALU compares {left} with {right}: Z={z}, N={n}. The Accumulator is unchanged.",
    "exec.not": "The ALU negates {value} logically; the Accumulator now holds {result}.",
    "exec.store": "The Accumulator value {value} goes on the Data bus and is written into memory cell {addr}.",
    "exec.jump": "{mnemonic} always jumps: the Program Counter is set to {target}.",
    "exec.branch.taken": "The condition of {mnemonic} holds, so the jump is taken: the Program Counter is set to {target}.",
    "exec.branch.not_taken": "The condition of {mnemonic} does not hold, so execution continues at {pc}.",
    "exec.nop": "NOP does nothing.",
    "exec.halt": "HLT puts the HALT signal on the Control bus and the CPU stops.",
    "fault.divide_by_zero": "Division of {left} by zero is impossible, so the CPU stops with a fault.",
    "edit": "Manual edit: {target} is set to {value}."
  }
})json";

inline constexpr std::string_view kCatalogEs = R"json({
  "locale": "es",
  "templates": {
    "fetch.addr": "El Contador de Programa ({pc}) se coloca en el bus de direcciones.",
    "fetch.opcode": "La palabra {hex} viaja por el bus de datos hasta el Registro de Instrucción, y el Contador de Programa avanza a {pc}.",
    "fetch.operand_addr": "El Contador de Programa ({pc}) se coloca en el bus de direcciones para leer el operando.",
    "fetch.operand": "El operando {value} se copia en el Registro de Instrucción, y el Contador de Programa avanza a {pc}.",
    "decode": "La Unidad de Control decodifica la instrucción {text} (direccionamiento {mode}).",
    "decode.illegal": "La palabra {hex} no es una instrucción válida; la CPU se detiene con un error.",
    "exec.read": "La dirección del operando {addr} se coloca en el bus de direcciones y la memoria devuelve {value} por el bus de datos.",
    "exec.load": "El Acumulador se carga con {value}.",
    "exec.alu": "La ALU calcula {left} {mnemonic} {right}; el Acumulador contiene ahora {result}.",
    "exec.compare": "La ALU compara {left} con {right}: Z={z}, N={n}. El Acumulador no cambia.",
    "exec.not": "La ALU niega lógicamente {value}; el Acumulador contiene ahora {result}.",
    "exec.store": "El valor del Acumulador {value} pasa por el bus de datos y se escribe en la celda de memoria {addr}.",
    "exec.jump": "{mnemonic} salta siempre: el Contador de Programa pasa a {target}.",
    "exec.branch.taken": "La condición de {mnemonic} se cumple y se salta: el Contador de Programa pasa a {target}.",
    "exec.branch.not_taken": "La condición de {mnemonic} no se cumple; la ejecución continúa en {pc}.",
    "exec.nop": "NOP no hace nada.",
    "exec.halt": "HLT envía la señal HALT por el bus de control y la CPU se detiene.",
    "fault.divide_by_zero": "No se puede dividir {left} entre cero; la CPU se detiene con un error.",
    "edit": "Edición manual: {target} toma el valor {value}."
  }
})json";

inline constexpr std::string_view kCatalogIt = R"json({
  "locale": "it",
  "templates": {
    "fetch.addr": "Il Program Counter ({pc}) viene posto sul bus indirizzi.",
    "fetch.opcode": "La parola {hex} viaggia sul bus dati fino all'Instruction Register, e il Program Counter avanza a {pc}.",
    "fetch.operand_addr": "Il Program Counter ({pc}) viene posto sul bus indirizzi per leggere l'operando.",
    "fetch.operand": "L'operando {value} viene copiato nell'Instruction Register, e il Program Counter avanza a {pc}.",
    "decode": "L'Unità di Controllo decodifica l'istruzione {text} (indirizzamento {mode}).",
    "decode.illegal": "La parola {hex} non è un'istruzione valida: la CPU si ferma con un errore.",
    "exec.read": "L'indirizzo dell'operando {addr} va sul bus indirizzi e la memoria restituisce {value} sul bus dati.",
    "exec.load": "L'Accumulatore viene caricato con {value}.",
    "exec.alu": "La ALU calcola {left} {mnemonic} {right}; l'Accumulatore ora contiene {result}.",
    "exec.compare": "La ALU confronta {left} con {right}: Z={z}, N={n}. L'Accumulatore non cambia.",
    "exec.not": "La ALU nega logicamente {value}; l'Accumulatore ora contiene {result}.",
    "exec.store": "Il valore dell'Accumulatore {value} va sul bus dati e viene scritto nella cella di memoria {addr}.",
    "exec.jump": "{mnemonic} salta sempre: il Program Counter diventa {target}.",
    "exec.branch.taken": "La condizione di {mnemonic} è vera, quindi il salto viene eseguito: il Program Counter diventa {target}.",
    "exec.branch.not_taken": "La condizione di {mnemonic} è falsa, quindi l'esecuzione prosegue da {pc}.",
    "exec.nop": "NOP non fa nulla.",
    "exec.halt": "HLT invia il segnale HALT sul bus di controllo e la CPU si ferma.",
    "fault.divide_by_zero": "Non si può dividere {left} per zero: la CPU si ferma con un errore.",
    "edit": "Modifica manuale: {target} assume il valore {value}."
  }
})json";

inline constexpr std::array<std::string_view, 3> builtin_catalog_sources() {
    return {kCatalogEn, kCatalogEs, kCatalogIt};
}

}  // namespace acsim
