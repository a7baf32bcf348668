#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ifcnorm/value.hpp"

namespace ifcnorm {

// (entity type, 0-based attribute position)
using AttributeSlot = std::pair<std::string, std::uint32_t>;

namespace detail {

// IFC4 entity types derived from IfcElement. These keep their GlobalId: the
// identity of placed building elements is meant to survive model edits, so
// rewriting it would break external references into the model.
inline const char* const element_type_names[] = {
    "IFCACTUATOR", "IFCAIRTERMINAL", "IFCAIRTERMINALBOX", "IFCAIRTOAIRHEATRECOVERY",
    "IFCALARM", "IFCAUDIOVISUALAPPLIANCE", "IFCBEAM", "IFCBEAMSTANDARDCASE",
    "IFCBOILER", "IFCBUILDINGELEMENTPART", "IFCBUILDINGELEMENTPROXY", "IFCBURNER",
    "IFCCABLECARRIERFITTING", "IFCCABLECARRIERSEGMENT", "IFCCABLEFITTING",
    "IFCCABLESEGMENT", "IFCCHILLER", "IFCCHIMNEY", "IFCCIVILELEMENT", "IFCCOIL",
    "IFCCOLUMN", "IFCCOLUMNSTANDARDCASE", "IFCCOMMUNICATIONSAPPLIANCE",
    "IFCCOMPRESSOR", "IFCCONDENSER", "IFCCONTROLLER", "IFCCOOLEDBEAM",
    "IFCCOOLINGTOWER", "IFCCOVERING", "IFCCURTAINWALL", "IFCDAMPER",
    "IFCDISCRETEACCESSORY", "IFCDISTRIBUTIONCHAMBERELEMENT",
    "IFCDISTRIBUTIONCONTROLELEMENT", "IFCDISTRIBUTIONELEMENT",
    "IFCDISTRIBUTIONFLOWELEMENT", "IFCDOOR", "IFCDOORSTANDARDCASE", "IFCDUCTFITTING",
    "IFCDUCTSEGMENT", "IFCDUCTSILENCER", "IFCELECTRICAPPLIANCE",
    "IFCELECTRICDISTRIBUTIONBOARD", "IFCELECTRICFLOWSTORAGEDEVICE",
    "IFCELECTRICGENERATOR", "IFCELECTRICMOTOR", "IFCELECTRICTIMECONTROL",
    "IFCELECTRICALELEMENT", "IFCELEMENTASSEMBLY", "IFCENERGYCONVERSIONDEVICE",
    "IFCENGINE", "IFCEQUIPMENTELEMENT", "IFCEVAPORATIVECOOLER", "IFCEVAPORATOR",
    "IFCFAN", "IFCFASTENER", "IFCFILTER", "IFCFIRESUPPRESSIONTERMINAL",
    "IFCFLOWCONTROLLER", "IFCFLOWFITTING", "IFCFLOWINSTRUMENT", "IFCFLOWMETER",
    "IFCFLOWMOVINGDEVICE", "IFCFLOWSEGMENT", "IFCFLOWSTORAGEDEVICE",
    "IFCFLOWTERMINAL", "IFCFLOWTREATMENTDEVICE", "IFCFOOTING", "IFCFURNISHINGELEMENT",
    "IFCFURNITURE", "IFCGEOGRAPHICELEMENT", "IFCHEATEXCHANGER", "IFCHUMIDIFIER",
    "IFCINTERCEPTOR", "IFCJUNCTIONBOX", "IFCLAMP", "IFCLIGHTFIXTURE",
    "IFCMECHANICALFASTENER", "IFCMEDICALDEVICE", "IFCMEMBER", "IFCMEMBERSTANDARDCASE",
    "IFCMOTORCONNECTION", "IFCOPENINGELEMENT", "IFCOPENINGSTANDARDCASE", "IFCOUTLET",
    "IFCPILE", "IFCPIPEFITTING", "IFCPIPESEGMENT", "IFCPLATE", "IFCPLATESTANDARDCASE",
    "IFCPROJECTIONELEMENT", "IFCPROTECTIVEDEVICE", "IFCPROTECTIVEDEVICETRIPPINGUNIT",
    "IFCPUMP", "IFCRAILING", "IFCRAMP", "IFCRAMPFLIGHT", "IFCREINFORCINGBAR",
    "IFCREINFORCINGMESH", "IFCROOF", "IFCSANITARYTERMINAL", "IFCSENSOR",
    "IFCSHADINGDEVICE", "IFCSLAB", "IFCSLABELEMENTEDCASE", "IFCSLABSTANDARDCASE",
    "IFCSOLARDEVICE", "IFCSPACEHEATER", "IFCSTACKTERMINAL", "IFCSTAIR",
    "IFCSTAIRFLIGHT", "IFCSURFACEFEATURE", "IFCSWITCHINGDEVICE",
    "IFCSYSTEMFURNITUREELEMENT", "IFCTANK", "IFCTENDON", "IFCTENDONANCHOR",
    "IFCTRANSFORMER", "IFCTRANSPORTELEMENT", "IFCTUBEBUNDLE",
    "IFCUNITARYCONTROLELEMENT", "IFCUNITARYEQUIPMENT", "IFCVALVE",
    "IFCVIBRATIONISOLATOR", "IFCVIRTUALELEMENT", "IFCVOIDINGFEATURE", "IFCWALL",
    "IFCWALLELEMENTEDCASE", "IFCWALLSTANDARDCASE", "IFCWASTETERMINAL", "IFCWINDOW",
    "IFCWINDOWSTANDARDCASE",
};

// All other IFC4 entity types that carry a GlobalId as their first attribute
// (objects, type objects, property set definitions, relationships, ...).
inline const char* const non_element_rooted_type_names[] = {
    // project / spatial structure
    "IFCPROJECT", "IFCPROJECTLIBRARY", "IFCSITE", "IFCBUILDING", "IFCBUILDINGSTOREY",
    "IFCSPACE", "IFCSPATIALZONE", "IFCEXTERNALSPATIALELEMENT", "IFCGRID",
    "IFCANNOTATION", "IFCPROXY", "IFCDISTRIBUTIONPORT",
    // groups / systems
    "IFCGROUP", "IFCINVENTORY", "IFCSYSTEM", "IFCBUILDINGSYSTEM",
    "IFCDISTRIBUTIONSYSTEM", "IFCDISTRIBUTIONCIRCUIT", "IFCZONE", "IFCASSET",
    "IFCSTRUCTURALANALYSISMODEL", "IFCSTRUCTURALLOADGROUP", "IFCSTRUCTURALLOADCASE",
    "IFCSTRUCTURALRESULTGROUP", "IFCELECTRICALCIRCUIT",
    // actors / processes / resources / controls
    "IFCACTOR", "IFCOCCUPANT", "IFCPROCEDURE", "IFCTASK", "IFCEVENT",
    "IFCCONSTRUCTIONEQUIPMENTRESOURCE", "IFCCONSTRUCTIONMATERIALRESOURCE",
    "IFCCONSTRUCTIONPRODUCTRESOURCE", "IFCCREWRESOURCE", "IFCLABORRESOURCE",
    "IFCSUBCONTRACTRESOURCE", "IFCACTIONREQUEST", "IFCCOSTITEM", "IFCCOSTSCHEDULE",
    "IFCPERFORMANCEHISTORY", "IFCPERMIT", "IFCPROJECTORDER", "IFCWORKCALENDAR",
    "IFCWORKPLAN", "IFCWORKSCHEDULE",
    // structural items and activities
    "IFCSTRUCTURALCURVEMEMBER", "IFCSTRUCTURALCURVEMEMBERVARYING",
    "IFCSTRUCTURALSURFACEMEMBER", "IFCSTRUCTURALSURFACEMEMBERVARYING",
    "IFCSTRUCTURALPOINTCONNECTION", "IFCSTRUCTURALCURVECONNECTION",
    "IFCSTRUCTURALSURFACECONNECTION", "IFCSTRUCTURALCURVEACTION",
    "IFCSTRUCTURALLINEARACTION", "IFCSTRUCTURALPOINTACTION",
    "IFCSTRUCTURALSURFACEACTION", "IFCSTRUCTURALPLANARACTION",
    "IFCSTRUCTURALCURVEREACTION", "IFCSTRUCTURALPOINTREACTION",
    "IFCSTRUCTURALSURFACEREACTION",
    // type objects
    "IFCTYPEOBJECT", "IFCTYPEPRODUCT", "IFCELEMENTTYPE", "IFCBUILDINGELEMENTPROXYTYPE",
    "IFCBEAMTYPE", "IFCCHIMNEYTYPE", "IFCCOLUMNTYPE", "IFCCOVERINGTYPE",
    "IFCCURTAINWALLTYPE", "IFCDOORTYPE", "IFCDOORSTYLE", "IFCFOOTINGTYPE",
    "IFCMEMBERTYPE", "IFCPILETYPE", "IFCPLATETYPE", "IFCRAILINGTYPE",
    "IFCRAMPFLIGHTTYPE", "IFCRAMPTYPE", "IFCROOFTYPE", "IFCSHADINGDEVICETYPE",
    "IFCSLABTYPE", "IFCSTAIRFLIGHTTYPE", "IFCSTAIRTYPE", "IFCWALLTYPE",
    "IFCWINDOWTYPE", "IFCWINDOWSTYLE", "IFCACTUATORTYPE", "IFCAIRTERMINALBOXTYPE",
    "IFCAIRTERMINALTYPE", "IFCAIRTOAIRHEATRECOVERYTYPE", "IFCALARMTYPE",
    "IFCAUDIOVISUALAPPLIANCETYPE", "IFCBOILERTYPE", "IFCBUILDINGELEMENTPARTTYPE",
    "IFCBURNERTYPE", "IFCCABLECARRIERFITTINGTYPE", "IFCCABLECARRIERSEGMENTTYPE",
    "IFCCABLEFITTINGTYPE", "IFCCABLESEGMENTTYPE", "IFCCHILLERTYPE", "IFCCOILTYPE",
    "IFCCOMMUNICATIONSAPPLIANCETYPE", "IFCCOMPRESSORTYPE", "IFCCONDENSERTYPE",
    "IFCCONTROLLERTYPE", "IFCCOOLEDBEAMTYPE", "IFCCOOLINGTOWERTYPE", "IFCDAMPERTYPE",
    "IFCDISCRETEACCESSORYTYPE", "IFCDISTRIBUTIONCHAMBERELEMENTTYPE",
    "IFCDISTRIBUTIONCONTROLELEMENTTYPE", "IFCDISTRIBUTIONELEMENTTYPE",
    "IFCDISTRIBUTIONFLOWELEMENTTYPE", "IFCDUCTFITTINGTYPE", "IFCDUCTSEGMENTTYPE",
    "IFCDUCTSILENCERTYPE", "IFCELECTRICAPPLIANCETYPE",
    "IFCELECTRICDISTRIBUTIONBOARDTYPE", "IFCELECTRICFLOWSTORAGEDEVICETYPE",
    "IFCELECTRICGENERATORTYPE", "IFCELECTRICMOTORTYPE", "IFCELECTRICTIMECONTROLTYPE",
    "IFCELEMENTASSEMBLYTYPE", "IFCENERGYCONVERSIONDEVICETYPE", "IFCENGINETYPE",
    "IFCEVAPORATIVECOOLERTYPE", "IFCEVAPORATORTYPE", "IFCFANTYPE", "IFCFASTENERTYPE",
    "IFCFILTERTYPE", "IFCFIRESUPPRESSIONTERMINALTYPE", "IFCFLOWCONTROLLERTYPE",
    "IFCFLOWFITTINGTYPE", "IFCFLOWINSTRUMENTTYPE", "IFCFLOWMETERTYPE",
    "IFCFLOWMOVINGDEVICETYPE", "IFCFLOWSEGMENTTYPE", "IFCFLOWSTORAGEDEVICETYPE",
    "IFCFLOWTERMINALTYPE", "IFCFLOWTREATMENTDEVICETYPE", "IFCFURNISHINGELEMENTTYPE",
    "IFCFURNITURETYPE", "IFCGEOGRAPHICELEMENTTYPE", "IFCHEATEXCHANGERTYPE",
    "IFCHUMIDIFIERTYPE", "IFCINTERCEPTORTYPE", "IFCJUNCTIONBOXTYPE", "IFCLAMPTYPE",
    "IFCLIGHTFIXTURETYPE", "IFCMECHANICALFASTENERTYPE", "IFCMEDICALDEVICETYPE",
    "IFCMOTORCONNECTIONTYPE", "IFCOUTLETTYPE", "IFCPIPEFITTINGTYPE",
    "IFCPIPESEGMENTTYPE", "IFCPROTECTIVEDEVICETRIPPINGUNITTYPE",
    "IFCPROTECTIVEDEVICETYPE", "IFCPUMPTYPE", "IFCREINFORCINGBARTYPE",
    "IFCREINFORCINGMESHTYPE", "IFCSANITARYTERMINALTYPE", "IFCSENSORTYPE",
    "IFCSOLARDEVICETYPE", "IFCSPACEHEATERTYPE", "IFCSPACETYPE", "IFCSPATIALZONETYPE",
    "IFCSTACKTERMINALTYPE", "IFCSWITCHINGDEVICETYPE", "IFCSYSTEMFURNITUREELEMENTTYPE",
    "IFCTANKTYPE", "IFCTENDONANCHORTYPE", "IFCTENDONTYPE", "IFCTRANSFORMERTYPE",
    "IFCTRANSPORTELEMENTTYPE", "IFCTUBEBUNDLETYPE", "IFCUNITARYCONTROLELEMENTTYPE",
    "IFCUNITARYEQUIPMENTTYPE", "IFCVALVETYPE", "IFCVIBRATIONISOLATORTYPE",
    "IFCWASTETERMINALTYPE", "IFCEVENTTYPE", "IFCPROCEDURETYPE", "IFCTASKTYPE",
    "IFCFURNITURESTANDARD", "IFCEQUIPMENTSTANDARD",
    // property / quantity definitions
    "IFCPROPERTYSET", "IFCELEMENTQUANTITY", "IFCPROPERTYSETTEMPLATE",
    "IFCSIMPLEPROPERTYTEMPLATE", "IFCCOMPLEXPROPERTYTEMPLATE",
    "IFCDOORLININGPROPERTIES", "IFCDOORPANELPROPERTIES", "IFCWINDOWLININGPROPERTIES",
    "IFCWINDOWPANELPROPERTIES", "IFCPERMEABLECOVERINGPROPERTIES",
    "IFCREINFORCEMENTDEFINITIONPROPERTIES", "IFCENERGYPROPERTIES",
    "IFCDEVICELIFECYLEPROPERTIES", "IFCFLUIDFLOWPROPERTIES",
    "IFCELECTRICALBASEPROPERTIES", "IFCSOUNDPROPERTIES", "IFCSOUNDVALUE",
    "IFCSPACETHERMALLOADPROPERTIES",
    // relationships
    "IFCRELAGGREGATES", "IFCRELNESTS", "IFCRELDECLARES", "IFCRELDEFINESBYOBJECT",
    "IFCRELDEFINESBYPROPERTIES", "IFCRELDEFINESBYTEMPLATE", "IFCRELDEFINESBYTYPE",
    "IFCRELASSIGNSTOACTOR", "IFCRELASSIGNSTOCONTROL", "IFCRELASSIGNSTOGROUP",
    "IFCRELASSIGNSTOGROUPBYFACTOR", "IFCRELASSIGNSTOPROCESS",
    "IFCRELASSIGNSTOPRODUCT", "IFCRELASSIGNSTORESOURCE", "IFCRELASSOCIATESAPPROVAL",
    "IFCRELASSOCIATESCLASSIFICATION", "IFCRELASSOCIATESCONSTRAINT",
    "IFCRELASSOCIATESDOCUMENT", "IFCRELASSOCIATESLIBRARY", "IFCRELASSOCIATESMATERIAL",
    "IFCRELASSOCIATESPROFILEPROPERTIES", "IFCRELASSOCIATESAPPLIEDVALUE",
    "IFCRELCONNECTSELEMENTS", "IFCRELCONNECTSPATHELEMENTS",
    "IFCRELCONNECTSPORTTOELEMENT", "IFCRELCONNECTSPORTS",
    "IFCRELCONNECTSSTRUCTURALACTIVITY", "IFCRELCONNECTSSTRUCTURALELEMENT",
    "IFCRELCONNECTSSTRUCTURALMEMBER", "IFCRELCONNECTSWITHECCENTRICITY",
    "IFCRELCONNECTSWITHREALIZINGELEMENTS", "IFCRELCONTAINEDINSPATIALSTRUCTURE",
    "IFCRELCOVERSBLDGELEMENTS", "IFCRELCOVERSSPACES", "IFCRELFILLSELEMENT",
    "IFCRELFLOWCONTROLELEMENTS", "IFCRELINTERFERESELEMENTS", "IFCRELPROJECTSELEMENT",
    "IFCRELREFERENCEDINSPATIALSTRUCTURE", "IFCRELSCHEDULESCOSTITEMS",
    "IFCRELSEQUENCE", "IFCRELSERVICESBUILDINGS", "IFCRELSPACEBOUNDARY",
    "IFCRELSPACEBOUNDARY1STLEVEL", "IFCRELSPACEBOUNDARY2NDLEVEL",
    "IFCRELVOIDSELEMENT", "IFCRELOCCUPIESSPACES", "IFCRELINTERACTIONREQUIREMENTS",
};

}  // namespace detail

// Entity types whose GlobalId is never rewritten.
inline const std::unordered_set<std::string>& ifc_element_types() {
    static const std::unordered_set<std::string> set(
        std::begin(detail::element_type_names), std::end(detail::element_type_names));
    return set;
}

// Entity types that carry a GlobalId as attribute 0.
inline const std::unordered_set<std::string>& ifc_rooted_types() {
    static const std::unordered_set<std::string> set = [] {
        std::unordered_set<std::string> s(std::begin(detail::element_type_names),
                                          std::end(detail::element_type_names));
        s.insert(std::begin(detail::non_element_rooted_type_names),
                 std::end(detail::non_element_rooted_type_names));
        return s;
    }();
    return set;
}

// Attribute positions declared as unordered collections: the stored order is
// exporter noise, so members are sorted before hashing and serialization.
// Anything not listed here keeps its order.
inline const std::vector<AttributeSlot>& default_unordered_attributes() {
    static const std::vector<AttributeSlot> table = {
        {"IFCCOMPLEXPROPERTY", 3},                    // HasProperties
        {"IFCELEMENTQUANTITY", 5},                    // Quantities
        {"IFCPRESENTATIONSTYLEASSIGNMENT", 0},        // Styles
        {"IFCPRODUCTDEFINITIONSHAPE", 2},             // Representations
        {"IFCPROJECT", 7},                            // RepresentationContexts
        {"IFCPROPERTYSET", 4},                        // HasProperties
        {"IFCRELAGGREGATES", 5},                      // RelatedObjects
        {"IFCRELASSIGNSTOGROUP", 4},                  // RelatedObjects
        {"IFCRELASSOCIATESMATERIAL", 4},              // RelatedObjects
        {"IFCRELCONTAINEDINSPATIALSTRUCTURE", 4},     // RelatedElements
        {"IFCRELDECLARES", 5},                        // RelatedDefinitions
        {"IFCRELDEFINESBYPROPERTIES", 4},             // RelatedObjects
        {"IFCRELDEFINESBYTYPE", 4},                   // RelatedObjects
        {"IFCRELNESTS", 5},                           // RelatedObjects
        {"IFCSHAPEREPRESENTATION", 3},                // Items
        {"IFCSTYLEDITEM", 1},                         // Styles
        {"IFCSURFACESTYLE", 2},                       // Styles
        {"IFCUNITASSIGNMENT", 0},                     // Units
    };
    return table;
}

// Override file format: one "TYPENAME index" pair per line, '#' comments and
// blank lines ignored. Type names are folded to uppercase.
inline std::vector<AttributeSlot> parse_unordered_table(std::string_view text) {
    std::vector<AttributeSlot> table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::size_t i = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size() || line[i] == '#') continue;

        std::string name;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
            char c = line[i];
            name += (c >= 'a' && c <= 'z') ? static_cast<char>(c - 32) : c;
            ++i;
        }
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::uint64_t index = 0;
        bool any = false;
        while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
            index = index * 10 + static_cast<std::uint64_t>(line[i] - '0');
            any = true;
            ++i;
        }
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (!any || i != line.size())
            throw ParseError("expected 'TYPENAME index'", line_no, 1);
        table.emplace_back(std::move(name), static_cast<std::uint32_t>(index));
    }
    return table;
}

}  // namespace ifcnorm
